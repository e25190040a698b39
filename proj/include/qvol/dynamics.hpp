#ifndef QVOL_DYNAMICS_HPP
#define QVOL_DYNAMICS_HPP

#include "qvol/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qvol::dynamics {

/**
 * Full parameter set of one simulated game: model constants plus run
 * controls. Defaults cover only the keys with a natural neutral value;
 * epsilon, u, D, mu, dt, sigma, rounds and transient must always be set.
 */
struct GameParams {
    double epsilon = 0.0; ///< coupling strength in [0, 1]
    double u = 0.0;       ///< scale parameter, 0 < u < 1
    double D = 0.0;       ///< power-law scaling parameter, != 1
    double mu = 0.0;      ///< mean return per clock time
    double dt = 0.0;      ///< round duration in clock time
    double sigma = 0.0;   ///< fixed volatility component, > 0
    double b = 1.0;       ///< evolutionary pressure
    double hbar_s = 1.0;  ///< Planck-like constant
    double s0 = 1.0;      ///< initial price
    std::uint64_t seed = 42;
    std::int64_t rounds = 0;
    std::int64_t transient = 0;
    std::optional<double> i0; ///< initial driver in [0, 1); nullopt = seeded uniform
    double r_init = 0.0;      ///< return fed to the coupling at the first round

    /// Throws domain_error naming the offending key.
    void validate() const;
};

/// One round's full state. I is the canonical chaotic state; K, tau_B,
/// omega and mass are derived from it each round and never independently
/// mutated.
struct RoundState {
    std::int64_t round = 0; ///< 1-based global round index
    double t = 0.0;         ///< clock time, round * dt
    double i = 0.0;         ///< fundamental driver I_t
    double k = 0.0;         ///< kinetic volatility component K_t
    double tau_b = 0.0;     ///< intrinsic time 2 * K_t
    double omega = 0.0;     ///< round oscillator frequency
    double mass = 0.0;      ///< round oscillator mass term
    double x = 0.0;         ///< sampled value fitness
    double r = 0.0;         ///< return mu*dt + sigma*x
    double s = 0.0;         ///< price
};

struct Trajectory {
    GameParams params;
    std::vector<RoundState> states; ///< post-transient rounds only
    std::string engine_version;
};

/// Coupled shift map: (1 - eps) * (2*i mod 1) + eps * |r|. i_prev >= 0.
double shift_step(double i_prev, double r_prev, double epsilon);

/// Power-law conjugacy K = (1 + I/u)^(1-D). i >= 0.
double k_from_i(double i, double u, double D);

/// Inverse conjugacy I = u * (K^(1/(1-D)) - 1). Throws on k <= 0 or D == 1.
double i_from_k(double k, double u, double D);

/// Literal one-step composition of the K map: transport to I, shift, map
/// back. Kept separate from the engine so the conjugacy can be tested.
double kinetic_map_direct(double k_prev, double r_prev, const GameParams& p);

/// Predicted log-log slope D/(1-D) of the stationary K histogram at eps=0.
double invariant_density_exponent(double D);

/// Intrinsic time tau_B = 2K. k must be positive.
double intrinsic_time(double k);

struct ReturnSample {
    double x; ///< fitness draw, N(0, 2k)
    double r; ///< mu*dt + sigma*x
};

/// Draw the round's fitness and return from the equilibrium (ground-state)
/// density with variance 2k.
ReturnSample sample_return(double k, const GameParams& p, Rng& rng);

/// Advance one round from prev: shift I, derive the round oscillator,
/// confirm the equilibrium, sample the return, accumulate the price.
RoundState step_round(const RoundState& prev, const GameParams& p, Rng& rng);

/// Run the full game: `rounds` rounds, first `transient` discarded.
/// Deterministic given params.seed.
Trajectory simulate(const GameParams& p);

/// CSV serialization: header `round,t,I,K,tau_B,omega,mass,x,r,S`, one row
/// per post-transient round, 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

/// Companion metadata document (params, seed, engine version, counts).
std::string trajectory_metadata_json(const Trajectory& traj);

} // namespace qvol::dynamics

#endif
