#include "qvol/dynamics.hpp"

#include "qvol/errors.hpp"
#include "qvol/oscillator.hpp"
#include "qvol/table.hpp"
#include "qvol/version.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace qvol::dynamics {

namespace {

// Levels scanned each round when confirming the equilibrium strategy.
constexpr int kEquilibriumScan = 4;

[[noreturn]] void bad_param(const std::string& key, const std::string& what) {
    throw domain_error("parameter '" + key + "' " + what);
}

void check_finite_state(const RoundState& st) {
    const bool ok = std::isfinite(st.i) && std::isfinite(st.k) && std::isfinite(st.tau_b) &&
                    std::isfinite(st.omega) && std::isfinite(st.mass) &&
                    std::isfinite(st.x) && std::isfinite(st.r) && std::isfinite(st.s);
    if (!ok) {
        throw numerical_error("non-finite state at round " + std::to_string(st.round));
    }
}

// Completes a round once the new driver value is known: derives the round
// oscillator, confirms the ground-state equilibrium, samples the return and
// accumulates the price.
RoundState finish_round(std::int64_t round, double i, double prev_price,
                        const GameParams& p, Rng& rng) {
    RoundState st;
    st.round = round;
    st.t = static_cast<double>(round) * p.dt;
    st.i = i;
    st.k = k_from_i(i, p.u, p.D);
    if (!std::isfinite(st.i) || !std::isfinite(st.k) || !(st.k > 0.0)) {
        throw numerical_error("non-finite state at round " + std::to_string(round));
    }
    st.tau_b = intrinsic_time(st.k);

    const auto osc = oscillator::derive_round_oscillator(p.hbar_s, p.b, st.tau_b);
    st.omega = osc.omega;
    st.mass = osc.mass;

    const auto eq = oscillator::equilibrium_strategy(osc, kEquilibriumScan);
    const double drift = std::abs(eq.min_risk - st.tau_b);
    if (eq.level.n != 0 || drift > 4.0 * std::numeric_limits<double>::epsilon() * st.tau_b) {
        throw numerical_error("equilibrium check failed at round " + std::to_string(round));
    }

    const auto draw = sample_return(st.k, p, rng);
    st.x = draw.x;
    st.r = draw.r;
    st.s = prev_price * std::exp(st.r);
    check_finite_state(st);
    return st;
}

} // namespace

void GameParams::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) bad_param("epsilon", "must lie in [0, 1]");
    if (!(u > 0.0 && u < 1.0)) bad_param("u", "must lie in (0, 1)");
    if (!std::isfinite(D) || D == 1.0) bad_param("D", "must be finite and != 1");
    if (!std::isfinite(mu)) bad_param("mu", "must be finite");
    if (!(dt > 0.0)) bad_param("dt", "must be positive");
    if (!(sigma > 0.0)) bad_param("sigma", "must be positive");
    if (!(b > 0.0)) bad_param("b", "must be positive");
    if (!(hbar_s > 0.0)) bad_param("hbar_s", "must be positive");
    if (!(s0 > 0.0)) bad_param("s0", "must be positive");
    if (rounds < 1) bad_param("rounds", "must be >= 1");
    if (transient < 0) bad_param("transient", "must be >= 0");
    if (transient >= rounds) bad_param("transient", "must be smaller than rounds");
    if (i0 && !(*i0 >= 0.0 && *i0 < 1.0)) bad_param("i0", "must lie in [0, 1)");
    if (!std::isfinite(r_init)) bad_param("r_init", "must be finite");
}

double shift_step(double i_prev, double r_prev, double epsilon) {
    if (!(i_prev >= 0.0)) {
        throw domain_error("shift_step requires i_prev >= 0, got " + std::to_string(i_prev));
    }
    return (1.0 - epsilon) * std::fmod(2.0 * i_prev, 1.0) + epsilon * std::abs(r_prev);
}

double k_from_i(double i, double u, double D) {
    if (!(i >= 0.0)) {
        throw domain_error("k_from_i requires i >= 0, got " + std::to_string(i));
    }
    return std::pow(1.0 + i / u, 1.0 - D);
}

double i_from_k(double k, double u, double D) {
    if (!(k > 0.0)) {
        throw domain_error("i_from_k requires k > 0, got " + std::to_string(k));
    }
    if (D == 1.0) {
        throw domain_error("i_from_k requires D != 1");
    }
    return u * (std::pow(k, 1.0 / (1.0 - D)) - 1.0);
}

double kinetic_map_direct(double k_prev, double r_prev, const GameParams& p) {
    const double i = i_from_k(k_prev, p.u, p.D);
    return k_from_i(shift_step(i, r_prev, p.epsilon), p.u, p.D);
}

double invariant_density_exponent(double D) {
    if (D == 1.0) {
        throw domain_error("invariant density exponent undefined at D = 1");
    }
    return D / (1.0 - D);
}

double intrinsic_time(double k) {
    if (!(k > 0.0)) {
        throw domain_error("intrinsic_time requires k > 0, got " + std::to_string(k));
    }
    return 2.0 * k;
}

ReturnSample sample_return(double k, const GameParams& p, Rng& rng) {
    if (!(k > 0.0)) {
        throw domain_error("sample_return requires k > 0, got " + std::to_string(k));
    }
    const double x = std::sqrt(2.0 * k) * rng.normal();
    return {x, p.mu * p.dt + p.sigma * x};
}

RoundState step_round(const RoundState& prev, const GameParams& p, Rng& rng) {
    const double i = shift_step(prev.i, prev.r, p.epsilon);
    return finish_round(prev.round + 1, i, prev.s, p, rng);
}

Trajectory simulate(const GameParams& p) {
    p.validate();

    Trajectory traj;
    traj.params = p;
    traj.engine_version = kEngineVersion;
    traj.states.reserve(static_cast<std::size_t>(p.rounds - p.transient));

    Rng rng(p.seed);

    // Uncoupled runs started from a random initial condition use the exact
    // digit-tape orbit (see BitTape); everything else iterates doubles,
    // which is exact for a user-specified dyadic initial condition and
    // continually refreshed by the coupling term otherwise.
    const bool tape_mode = (p.epsilon == 0.0) && !p.i0.has_value();

    if (tape_mode) {
        BitTape tape(rng);
        double prev_price = p.s0;
        for (std::int64_t round = 1; round <= p.rounds; ++round) {
            tape.shift();
            RoundState st = finish_round(round, tape.value(), prev_price, p, rng);
            prev_price = st.s;
            if (round > p.transient) traj.states.push_back(st);
        }
        return traj;
    }

    RoundState prev;
    prev.round = 0;
    prev.i = p.i0 ? *p.i0 : rng.uniform01();
    prev.r = p.r_init;
    prev.s = p.s0;
    for (std::int64_t round = 1; round <= p.rounds; ++round) {
        prev = step_round(prev, p, rng);
        if (round > p.transient) traj.states.push_back(prev);
    }
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "round,t,I,K,tau_B,omega,mass,x,r,S\n";
    for (const auto& st : traj.states) {
        out << st.round << ',' << table::g17(st.t) << ',' << table::g17(st.i) << ','
            << table::g17(st.k) << ',' << table::g17(st.tau_b) << ',' << table::g17(st.omega)
            << ',' << table::g17(st.mass) << ',' << table::g17(st.x) << ','
            << table::g17(st.r) << ',' << table::g17(st.s) << '\n';
    }
}

std::string trajectory_metadata_json(const Trajectory& traj) {
    nlohmann::ordered_json j;
    j["engine_version"] = traj.engine_version;
    j["seed"] = traj.params.seed;
    j["rounds"] = traj.params.rounds;
    j["transient"] = traj.params.transient;
    j["kept"] = traj.states.size();
    nlohmann::ordered_json params;
    params["epsilon"] = traj.params.epsilon;
    params["u"] = traj.params.u;
    params["D"] = traj.params.D;
    params["mu"] = traj.params.mu;
    params["dt"] = traj.params.dt;
    params["sigma"] = traj.params.sigma;
    params["b"] = traj.params.b;
    params["hbar_s"] = traj.params.hbar_s;
    params["s0"] = traj.params.s0;
    if (traj.params.i0) {
        params["i0"] = *traj.params.i0;
    } else {
        params["i0"] = "random";
    }
    params["r_init"] = traj.params.r_init;
    j["params"] = params;
    return j.dump(2) + "\n";
}

} // namespace qvol::dynamics
