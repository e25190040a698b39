#ifndef QVOL_RNG_HPP
#define QVOL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace qvol {

/**
 * Deterministic 64-bit PRNG used for every stochastic element of a run.
 *
 * Algorithm (pinned for reproducibility):
 *   - state expansion: SplitMix64 over the user seed,
 *   - generation: xoshiro256++ (Blackman & Vigna),
 *   - uniform doubles: top 53 bits scaled by 2^-53, giving values in [0, 1),
 *   - normal deviates: Marsaglia polar method; the spare deviate of each
 *     accepted pair is discarded so the draw protocol is a pure function of
 *     the stream position.
 *
 * The same seed therefore yields bit-identical streams on any IEEE-754
 * platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            // SplitMix64 step
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal deviate via the Marsaglia polar method.
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

/**
 * Sliding window over the binary expansion of a uniformly random real
 * number in [0, 1).
 *
 * The Bernoulli doubling map is the digit shift on that expansion, so
 * advancing the window one bit per round realizes the exact orbit of a
 * random initial condition. Iterating the map on a bare double instead
 * loses one mantissa bit per round and collapses to the fixed point 0
 * after ~53 rounds, which would make every uncoupled run degenerate.
 */
class BitTape {
public:
    explicit BitTape(Rng& rng)
        : rng_(&rng), window_(rng.next_u64()), buffer_(rng.next_u64()), bits_left_(64) {}

    /// Current window as a double in [0, 1) (top 53 bits).
    double value() const { return static_cast<double>(window_ >> 11) * 0x1.0p-53; }

    /// Advance one binary digit (one application of the doubling map).
    void shift() {
        window_ = (window_ << 1) | (buffer_ >> 63);
        buffer_ <<= 1;
        if (--bits_left_ == 0) {
            buffer_ = rng_->next_u64();
            bits_left_ = 64;
        }
    }

private:
    Rng* rng_;
    std::uint64_t window_;
    std::uint64_t buffer_;
    int bits_left_;
};

} // namespace qvol

#endif
