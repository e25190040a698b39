#ifndef QVOL_TEST_HELPERS_HPP
#define QVOL_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testutil {

// Trapezoid quadrature on a uniform grid. Deliberately a different rule
// from the Simpson grid inside the library, so the two can cross-check.
inline double trapezoid(const std::function<double(double)>& f, double a, double b,
                        std::size_t nodes) {
    const double h = (b - a) / static_cast<double>(nodes - 1);
    double sum = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i + 1 < nodes; ++i) {
        sum += f(a + h * static_cast<double>(i));
    }
    return sum * h;
}

// Reference normal deviates independent of the library's generator.
class RefNormal {
public:
    explicit RefNormal(std::uint64_t seed) : gen_(seed) {}
    double operator()() { return dist_(gen_); }
    double uniform() { return uni_(gen_); }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> dist_{0.0, 1.0};
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

// Brownian path of length n (partial sums of unit normals).
inline std::vector<double> brownian_path(std::uint64_t seed, std::size_t n) {
    RefNormal rn(seed);
    std::vector<double> w;
    w.reserve(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w.push_back(acc);
        acc += rn();
    }
    return w;
}

// Brownian bridge pinned at zero on both ends, min-max normalized to [0,1].
inline std::vector<double> brownian_bridge01(std::uint64_t seed, std::size_t n) {
    std::vector<double> w = brownian_path(seed, n);
    const double wn = w.back();
    for (std::size_t i = 0; i < n; ++i) {
        w[i] -= (static_cast<double>(i) / static_cast<double>(n - 1)) * wn;
    }
    double lo = w[0], hi = w[0];
    for (double v : w) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double& v : w) v = (v - lo) / (hi - lo);
    return w;
}

} // namespace testutil

#endif
