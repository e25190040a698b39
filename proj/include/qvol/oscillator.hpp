#ifndef QVOL_OSCILLATOR_HPP
#define QVOL_OSCILLATOR_HPP

#include <cstddef>

namespace qvol::oscillator {

/**
 * The quantum restriction attached to one game round: a harmonic
 * oscillator in the company's value-fitness coordinate, parameterized by
 * the shares' Planck-like constant hbar_s, the evolutionary pressure b,
 * and the round's intrinsic time tau_B.
 *
 * Derived quantities satisfy
 *   omega^2 * mass = b,
 *   theta^2 = hbar_s / (2 * mass * omega) = tau_B,
 *   alpha * theta * sqrt(2) = 1.
 */
struct RoundOscillator {
    double hbar_s; ///< Planck-like constant, returns per oscillation frequency
    double b;      ///< evolutionary pressure (dimensionless)
    double omega;  ///< business-cycle angular frequency, radians per clock time
    double mass;   ///< mass-like term, inverse squared angular frequency
    double alpha;  ///< Gaussian width parameter (mass*b/hbar_s^2)^(1/4)
    double theta;  ///< volatility parameter 1/(sqrt(2)*alpha)
};

struct EnergyLevel {
    int n;         ///< quantum number, n >= 0
    double energy; ///< E_n = (n + 1/2) * hbar_s * omega, in units of returns
};

/// Risk-minimizing strategy over the discrete spectrum: always the ground
/// state, with min_risk = theta^2 = E_0 / b.
struct EquilibriumStrategy {
    EnergyLevel level;
    double theta;
    double min_risk;
};

/// Quadrature grid for numeric_moment: a symmetric composite-Simpson grid
/// on [-L, L] with L = half_width_scale * theta * sqrt(2n + 1).
struct GridSpec {
    double half_width_scale = 10.0;
    std::size_t nodes = 20001; ///< must satisfy nodes >= 10001 and nodes % 4 == 1
    double tolerance = 1e-8;   ///< Richardson estimate above this -> numerical_error
};

/// Largest supported quantum number (factorial-scale normalization factors
/// are representable below this).
inline constexpr int kMaxLevel = 170;

/// Build the round oscillator from (hbar_s, b, tau_B). All inputs must be
/// positive; throws domain_error naming the offending parameter.
RoundOscillator derive_round_oscillator(double hbar_s, double b, double tau_b);

/// Energy quantum E_n = (n + 1/2) * hbar_s * omega. n >= 0.
EnergyLevel energy_level(const RoundOscillator& osc, int n);

/// Physicists' Hermite polynomial H_n(y) by the standard recurrence.
double hermite(int n, double y);

/// Normalized eigenfunction psi_n(x). Evaluated through the bounded
/// recurrence on Hermite functions, so it neither overflows nor loses the
/// normalization for any representable x and n <= kMaxLevel.
double eigenfunction(const RoundOscillator& osc, int n, double x);

/// Closed-form expected risk <x^2> under psi_n: (n + 1/2) / alpha^2.
double expected_risk(const RoundOscillator& osc, int n);

/// Enumerates expected_risk over n = 0..n_max and returns the minimizer
/// (always the ground state). n_max >= 1.
EquilibriumStrategy equilibrium_strategy(const RoundOscillator& osc, int n_max);

/// |psi_0(x)|^2: mean-zero Gaussian density with standard deviation theta.
double ground_state_density(const RoundOscillator& osc, double x);

/// Gaussian density of the round's return r: mean mu*dt, variance
/// tau_B * sigma^2 with tau_B = theta^2. At tau_B = dt this is exactly the
/// fixed-clock Gaussian random-walk density.
double returns_density(const RoundOscillator& osc, double mu, double dt, double sigma,
                       double r);

/// Composite-Simpson evaluation of  integral |psi_n(x)|^2 * x^power dx,
/// power in {0, 1, 2}. Throws numerical_error if the Richardson error
/// estimate exceeds grid.tolerance.
double numeric_moment(const RoundOscillator& osc, int n, int power,
                      const GridSpec& grid = {});

} // namespace qvol::oscillator

#endif
