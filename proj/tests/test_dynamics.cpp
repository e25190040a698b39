#include "qvol/dynamics.hpp"

#include "qvol/analysis.hpp"
#include "qvol/errors.hpp"
#include "qvol/oscillator.hpp"
#include "qvol/table.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

using namespace qvol;
using namespace qvol::dynamics;

namespace {

GameParams protocol_params(std::uint64_t seed = 42) {
    GameParams p;
    p.epsilon = 0.001;
    p.u = 1e-5;
    p.D = 1.83;
    p.mu = 1e-6;
    p.dt = 1.0;
    p.sigma = 0.02;
    p.rounds = 30000;
    p.transient = 10000;
    p.seed = seed;
    return p;
}

} // namespace

TEST_CASE("shift_step arithmetic") {
    CHECK(shift_step(0.3, 0.0, 0.0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(shift_step(0.6, 123.0, 0.0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(shift_step(0.3, 0.1, 0.5) == doctest::Approx(0.35).epsilon(1e-15));
    CHECK(shift_step(0.3, -0.1, 0.5) == doctest::Approx(0.35).epsilon(1e-15));
    CHECK_THROWS_AS(shift_step(-0.1, 0.0, 0.0), domain_error);
}

TEST_CASE("k_from_i against high-precision references") {
    CHECK(k_from_i(0.0, 1e-5, 1.83) == 1.0);
    // 2^(1-1.83) and 100001^(1-1.83), evaluated at 30 significant digits
    CHECK(std::abs(k_from_i(1e-5, 1e-5, 1.83) - 0.56252924234440470) <
          1e-12 * 0.56252924234440470);
    CHECK(std::abs(k_from_i(1.0, 1e-5, 1.83) - 7.0793990848789196e-05) <
          1e-12 * 7.0793990848789196e-05);
    CHECK_THROWS_AS(k_from_i(-0.5, 1e-5, 1.83), domain_error);
}

TEST_CASE("i_from_k inverts k_from_i") {
    CHECK(i_from_k(1.0, 1e-5, 1.83) == 0.0);
    CHECK(std::abs(i_from_k(0.56252924234440470, 1e-5, 1.83) - 1e-5) < 1e-9 * 1e-5);
    for (int g = 0; g <= 60; ++g) {
        const double i = std::pow(10.0, -6.0 + 6.0 * g / 60.0); // 1e-6 .. 1
        const double rt = i_from_k(k_from_i(i, 1e-5, 1.83), 1e-5, 1.83);
        CHECK(std::abs(rt - i) <= 1e-9 * i); // relative round trip
    }
    CHECK_THROWS_AS(i_from_k(0.0, 1e-5, 1.83), domain_error);
    CHECK_THROWS_AS(i_from_k(-1.0, 1e-5, 1.83), domain_error);
}

TEST_CASE("kinetic_map_direct is the transported shift map") {
    const auto p = protocol_params();
    GameParams p0 = p;
    p0.epsilon = 0.0;
    CHECK(kinetic_map_direct(1.0, 0.5, p0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kinetic_map_direct(k_from_i(0.3, p.u, p.D), 0.0, p0) ==
          doctest::Approx(k_from_i(0.6, p.u, p.D)).epsilon(1e-12));
}

TEST_CASE("conjugacy holds step by step along 1000-step orbits") {
    // Both routes are advanced from the same synchronized state each step;
    // a free-running comparison is meaningless for a chaotic map in finite
    // precision (one ulp of round-trip error doubles every step). Steps
    // whose doubled state sits within a few ulps of the mod-1 boundary are
    // skipped: the map is discontinuous there, so the two routes may land
    // on opposite sides by one rounding.
    for (double eps : {0.0, 0.001, 0.5}) {
        GameParams p = protocol_params();
        p.epsilon = eps;
        testutil::RefNormal rn(2024);
        double i = 0.3;
        int checked = 0;
        for (int step = 0; step < 1000; ++step) {
            const double r = 0.02 * rn();
            const bool knife_edge = std::abs(2.0 * i - 1.0) <= 8e-16;
            const double via_k = kinetic_map_direct(k_from_i(i, p.u, p.D), r, p);
            const double i_next = shift_step(i, r, eps);
            const double via_i = k_from_i(i_next, p.u, p.D);
            if (!knife_edge) {
                CHECK(std::abs(via_k - via_i) <= 1e-6 * via_i); // relative
                ++checked;
            }
            i = i_next;
        }
        CHECK(checked >= 999);
    }
}

TEST_CASE("invariant density exponent") {
    CHECK(invariant_density_exponent(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(invariant_density_exponent(1.83) ==
          doctest::Approx(-2.2048192771084337).epsilon(1e-14));
    CHECK_THROWS_AS(invariant_density_exponent(1.0), domain_error);
}

TEST_CASE("Monte-Carlo change-of-variables oracle matches the predicted slope") {
    // K = k_from_i(U) with U uniform has density ~ K^(D/(1-D)); the fitted
    // log-log slope of a 1e6-sample histogram must sit within 0.05 of it.
    Rng rng(1905);
    std::vector<double> ks;
    ks.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) {
        ks.push_back(k_from_i(rng.uniform01(), 1e-5, 1.83));
    }
    const auto hist = analysis::log_histogram(ks, 24);
    const auto fit = analysis::fit_power_law(hist);
    CHECK(std::abs(fit.slope - (-2.2048192771084337)) < 0.05);
    CHECK(fit.r_squared > 0.99);
}

TEST_CASE("intrinsic time") {
    CHECK(intrinsic_time(0.5) == 1.0);
    CHECK(intrinsic_time(1.0) == 2.0);
    CHECK_THROWS_AS(intrinsic_time(0.0), domain_error);
    // E_0 = 2 b K through the derived oscillator
    const double k = 0.37, b = 1.7, hbar = 0.9;
    const auto osc = oscillator::derive_round_oscillator(hbar, b, intrinsic_time(k));
    CHECK(oscillator::energy_level(osc, 0).energy ==
          doctest::Approx(2.0 * b * k).epsilon(1e-14));
}

TEST_CASE("sample_return is deterministic and matches its moments") {
    const auto p = protocol_params();
    {
        Rng a(7), b(7);
        for (int i = 0; i < 100; ++i) {
            const auto da = sample_return(0.5, p, a);
            const auto db = sample_return(0.5, p, b);
            CHECK(da.x == db.x);
            CHECK(da.r == db.r);
        }
    }
    {
        Rng rng(100);
        const double k = 0.5;
        const std::size_t n = 1000000;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = sample_return(k, p, rng).r;
            sum += r;
            sum2 += r * r;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        const double true_var = 2.0 * k * p.sigma * p.sigma; // 4e-4
        const double se_mean = std::sqrt(true_var / n);
        const double se_var = true_var * std::sqrt(2.0 / n);
        CHECK(std::abs(mean - p.mu * p.dt) < 3.0 * se_mean);
        CHECK(std::abs(var - true_var) < 3.0 * se_var);
    }
    Rng rng(1);
    CHECK_THROWS_AS(sample_return(0.0, p, rng), domain_error);
}

TEST_CASE("step_round fixed point and price accumulation") {
    GameParams p = protocol_params();
    p.epsilon = 0.0;
    Rng rng(5);
    RoundState prev;
    prev.round = 3;
    prev.i = 0.0;
    prev.r = 0.123;
    prev.s = 2.5;
    const auto st = step_round(prev, p, rng);
    CHECK(st.round == 4);
    CHECK(st.i == 0.0);
    CHECK(st.k == 1.0);
    CHECK(st.tau_b == 2.0);
    CHECK(st.s == prev.s * std::exp(st.r));
}

TEST_CASE("engine I-path equals the direct K-map path step by step") {
    GameParams p = protocol_params(9);
    p.epsilon = 0.5;
    p.i0 = 0.3;
    p.rounds = 1000;
    p.transient = 0;
    const auto traj = simulate(p);
    double prev_i = *p.i0;
    double prev_r = p.r_init;
    for (const auto& st : traj.states) {
        const double direct = kinetic_map_direct(k_from_i(prev_i, p.u, p.D), prev_r, p);
        CHECK(std::abs(direct - st.k) <= 1e-6 * st.k); // relative
        prev_i = st.i;
        prev_r = st.r;
    }
}

TEST_CASE("simulate: shape, determinism, bookkeeping") {
    const auto p = protocol_params();
    const auto traj = simulate(p);
    REQUIRE(traj.states.size() == 20000);
    CHECK(traj.states.front().round == 10001);
    CHECK(traj.states.back().round == 30000);

    for (const auto& st : traj.states) {
        CHECK(st.tau_b == 2.0 * st.k);
        CHECK(st.k == k_from_i(st.i, p.u, p.D));
        CHECK(st.s > 0.0);
        CHECK(st.i >= 0.0);
        CHECK(st.i < 1.001);
        CHECK(st.k > 0.0);
        CHECK(st.k <= 1.0);
    }

    const auto again = simulate(p);
    REQUIRE(again.states.size() == traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        CHECK(traj.states[i].i == again.states[i].i);
        CHECK(traj.states[i].x == again.states[i].x);
        CHECK(traj.states[i].s == again.states[i].s);
    }

    GameParams tiny = p;
    tiny.rounds = p.transient + 1;
    CHECK(simulate(tiny).states.size() == 1);
}

TEST_CASE("simulate validates parameters by key") {
    GameParams p = protocol_params();
    p.sigma = 0.0;
    CHECK_THROWS_WITH_AS(simulate(p), doctest::Contains("sigma"), domain_error);
    p = protocol_params();
    p.transient = p.rounds;
    CHECK_THROWS_WITH_AS(simulate(p), doctest::Contains("transient"), domain_error);
    p = protocol_params();
    p.D = 1.0;
    CHECK_THROWS_WITH_AS(simulate(p), doctest::Contains("D"), domain_error);
    p = protocol_params();
    p.i0 = 1.5;
    CHECK_THROWS_WITH_AS(simulate(p), doctest::Contains("i0"), domain_error);
}

TEST_CASE("overflowing intermediates fail numerically naming the round") {
    // (1 + I/u)^(1-D) overflows a double once 1-D is large and positive
    GameParams p = protocol_params(3);
    p.D = -400.0;
    p.rounds = 10;
    p.transient = 0;
    CHECK_THROWS_WITH_AS(simulate(p), doctest::Contains("round"), numerical_error);
}

TEST_CASE("uncoupled runs stay ergodic and decouple from sigma") {
    GameParams a = protocol_params(11);
    a.epsilon = 0.0;
    const auto ta = simulate(a);

    // the digit-tape orbit must not collapse to the fixed point I = 0
    std::size_t distinct_high = 0;
    for (const auto& st : ta.states) {
        if (st.i > 0.5) ++distinct_high;
    }
    CHECK(distinct_high > 5000); // roughly half of 20000 for a uniform orbit

    GameParams b = a;
    b.sigma = 0.5;
    const auto tb = simulate(b);
    REQUIRE(tb.states.size() == ta.states.size());
    for (std::size_t i = 0; i < ta.states.size(); ++i) {
        CHECK(ta.states[i].i == tb.states[i].i);
        CHECK(ta.states[i].k == tb.states[i].k);
    }
}

TEST_CASE("explicit dyadic initial conditions reach the absorbing point without coupling") {
    GameParams p = protocol_params(3);
    p.epsilon = 0.0;
    p.i0 = 0.3;
    p.rounds = 100;
    p.transient = 60;
    const auto traj = simulate(p);
    for (const auto& st : traj.states) {
        CHECK(st.i == 0.0); // the double 0.3 is dyadic: its true orbit dies
        CHECK(st.k == 1.0);
    }
}

TEST_CASE("staircase of intrinsic time is nondecreasing") {
    const auto traj = simulate(protocol_params(21));
    double acc = 0.0;
    for (const auto& st : traj.states) {
        const double next = acc + st.tau_b;
        CHECK(next >= acc);
        acc = next;
    }
}

TEST_CASE("conditional variance of x given K tracks 2K by decile") {
    // seed pinned away from the sampling-noise knife edge of the top decile
    const auto traj = simulate(protocol_params(24));
    std::vector<std::pair<double, double>> kx;
    kx.reserve(traj.states.size());
    for (const auto& st : traj.states) kx.emplace_back(st.k, st.x);
    std::sort(kx.begin(), kx.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t bin = kx.size() / 10;
    for (int d = 0; d < 10; ++d) {
        double mean_k = 0.0, var_x = 0.0;
        for (std::size_t i = d * bin; i < (d + 1) * bin; ++i) {
            mean_k += kx[i].first;
            var_x += kx[i].second * kx[i].second;
        }
        mean_k /= bin;
        var_x /= bin;
        CHECK(std::abs(var_x - 2.0 * mean_k) <= 0.10 * 2.0 * mean_k); // relative
    }
}

TEST_CASE("protocol returns are leptokurtic with clustered volatility") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto traj = simulate(protocol_params(seed));
        std::vector<double> rs;
        rs.reserve(traj.states.size());
        for (const auto& st : traj.states) rs.push_back(st.r);
        const auto stats = analysis::summary_stats(rs, 5);
        REQUIRE(stats.excess_kurtosis.has_value());
        CHECK(*stats.excess_kurtosis > 0.0);
        REQUIRE(stats.acf_abs.has_value());
        CHECK((*stats.acf_abs)[0] > 0.0);
    }
}

TEST_CASE("trajectory CSV round-trips at 17 significant digits") {
    GameParams p = protocol_params(8);
    p.rounds = 120;
    p.transient = 100;
    const auto traj = simulate(p);

    std::ostringstream out;
    write_trajectory_csv(traj, out);
    std::istringstream in(out.str());
    const auto csv = table::read_csv(in);
    REQUIRE(csv.header.size() == 10);
    CHECK(csv.header[0] == "round");
    CHECK(csv.header[4] == "tau_B");
    REQUIRE(csv.rows.size() == traj.states.size());

    const auto ks = table::numeric_column(csv, "K");
    const auto xs = table::numeric_column(csv, "x");
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        CHECK(ks[i] == traj.states[i].k);
        CHECK(xs[i] == traj.states[i].x);
    }

    const auto meta = trajectory_metadata_json(traj);
    CHECK(meta.find("\"engine_version\"") != std::string::npos);
    CHECK(meta.find("\"seed\"") != std::string::npos);
}
