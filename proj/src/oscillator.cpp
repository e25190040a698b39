#include "qvol/oscillator.hpp"

#include "qvol/errors.hpp"

#include <cmath>
#include <string>

namespace qvol::oscillator {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw domain_error(std::string(name) + " must be positive and finite, got " +
                           std::to_string(value));
    }
}

void require_level(int n) {
    if (n < 0) {
        throw domain_error("quantum number n must be >= 0, got " + std::to_string(n));
    }
}

// psi_n(y) for the unit-width oscillator (alpha = 1), via the normalized
// three-term recurrence. Every intermediate is bounded by ~0.82, so the
// evaluation cannot overflow however large n or |y| get.
double hermite_function(int n, double y) {
    const double pi_quarter = 0.7511255444649425; // pi^(-1/4)
    double prev = 0.0;
    double cur = pi_quarter * std::exp(-0.5 * y * y);
    for (int k = 0; k < n; ++k) {
        const double next =
            std::sqrt(2.0 / (k + 1)) * y * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace

RoundOscillator derive_round_oscillator(double hbar_s, double b, double tau_b) {
    require_positive(hbar_s, "hbar_s");
    require_positive(b, "b");
    require_positive(tau_b, "tau_b");

    RoundOscillator osc;
    osc.hbar_s = hbar_s;
    osc.b = b;
    osc.omega = 2.0 * b * tau_b / hbar_s;
    osc.mass = hbar_s * hbar_s / (4.0 * b * tau_b * tau_b);
    osc.alpha = std::pow(osc.mass * b / (hbar_s * hbar_s), 0.25);
    osc.theta = 1.0 / (std::sqrt(2.0) * osc.alpha);
    return osc;
}

EnergyLevel energy_level(const RoundOscillator& osc, int n) {
    require_level(n);
    return {n, (n + 0.5) * osc.hbar_s * osc.omega};
}

double hermite(int n, double y) {
    require_level(n);
    double p0 = 1.0;
    if (n == 0) return p0;
    double p1 = 2.0 * y;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * y * p1 - 2.0 * k * p0;
        p0 = p1;
        p1 = next;
    }
    return p1;
}

double eigenfunction(const RoundOscillator& osc, int n, double x) {
    require_level(n);
    if (n > kMaxLevel) {
        throw domain_error("quantum number n exceeds supported maximum " +
                           std::to_string(kMaxLevel));
    }
    return std::sqrt(osc.alpha) * hermite_function(n, osc.alpha * x);
}

double expected_risk(const RoundOscillator& osc, int n) {
    require_level(n);
    return (n + 0.5) / (osc.alpha * osc.alpha);
}

EquilibriumStrategy equilibrium_strategy(const RoundOscillator& osc, int n_max) {
    if (n_max < 1) {
        throw domain_error("n_max must be >= 1, got " + std::to_string(n_max));
    }
    int best_n = 0;
    double best_risk = expected_risk(osc, 0);
    for (int n = 1; n <= n_max; ++n) {
        const double risk = expected_risk(osc, n);
        if (risk < best_risk) {
            best_risk = risk;
            best_n = n;
        }
    }
    return {energy_level(osc, best_n), osc.theta, best_risk};
}

double ground_state_density(const RoundOscillator& osc, double x) {
    const double theta = osc.theta;
    const double z = x / theta;
    return std::exp(-0.5 * z * z) / (theta * std::sqrt(2.0 * M_PI));
}

double returns_density(const RoundOscillator& osc, double mu, double dt, double sigma,
                       double r) {
    require_positive(sigma, "sigma");
    require_positive(dt, "dt");
    const double tau_b = osc.theta * osc.theta;
    const double var = tau_b * sigma * sigma;
    const double dev = r - mu * dt;
    return std::exp(-0.5 * dev * dev / var) / std::sqrt(2.0 * M_PI * var);
}

double numeric_moment(const RoundOscillator& osc, int n, int power, const GridSpec& grid) {
    require_level(n);
    if (n > kMaxLevel) {
        throw domain_error("quantum number n exceeds supported maximum " +
                           std::to_string(kMaxLevel));
    }
    if (power < 0 || power > 2) {
        throw domain_error("moment power must be 0, 1 or 2, got " + std::to_string(power));
    }
    if (grid.half_width_scale < 10.0) {
        throw domain_error("grid half_width_scale must be >= 10 theta");
    }
    if (grid.nodes < 10001 || grid.nodes % 4 != 1) {
        throw domain_error("grid nodes must be >= 10001 and congruent to 1 mod 4");
    }

    const double half_width = grid.half_width_scale * osc.theta * std::sqrt(2.0 * n + 1.0);
    const std::size_t nodes = grid.nodes;
    const double h = 2.0 * half_width / static_cast<double>(nodes - 1);

    auto integrand = [&](std::size_t idx) {
        const double x = -half_width + h * static_cast<double>(idx);
        const double psi = eigenfunction(osc, n, x);
        double value = psi * psi;
        for (int p = 0; p < power; ++p) value *= x;
        return value;
    };

    auto simpson = [&](std::size_t stride) {
        const std::size_t count = (nodes - 1) / stride; // number of intervals, even
        double sum = integrand(0) + integrand(nodes - 1);
        for (std::size_t j = 1; j < count; ++j) {
            sum += (j % 2 == 1 ? 4.0 : 2.0) * integrand(j * stride);
        }
        return sum * (h * static_cast<double>(stride)) / 3.0;
    };

    const double fine = simpson(1);
    const double coarse = simpson(2);
    const double err_estimate = std::abs(fine - coarse) / 15.0;
    if (err_estimate > grid.tolerance) {
        throw numerical_error("quadrature grid too coarse: estimated error " +
                              std::to_string(err_estimate) + " exceeds tolerance " +
                              std::to_string(grid.tolerance));
    }
    return fine;
}

} // namespace qvol::oscillator
