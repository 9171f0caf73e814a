#pragma once

#include <cmath>
#include <cstdint>

namespace ngca {

/// SplitMix64 finalizer; the basic mixing step all streams derive from.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the draws for (seed, counter) are a pure function of
/// both, so row-parallel generation reproduces the sequential result exactly.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t counter = 0) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = a ^ (counter * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
        state_ = splitmix64(s);
        cached_ = false;
        cache_ = 0.0;
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; avoids the platform-dependent
    /// std::normal_distribution so streams are bit-identical everywhere.
    double normal() {
        if (cached_) {
            cached_ = false;
            return cache_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cache_ = radius * std::sin(angle);
        cached_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t draw = next_u64();
        while (draw >= limit) draw = next_u64();
        return draw % bound;
    }

private:
    std::uint64_t state_;
    bool cached_;
    double cache_;
};

}  // namespace ngca
