#pragma once

#include <cstdint>

namespace shootcalc {

/// splitmix64 mixing step.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Small deterministic generator. The (seed, counter) constructor derives
/// an independent stream per counter value, so item i of a batch is
/// reproducible without generating items 0..i-1 and batches can be
/// sharded across workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

    Rng(std::uint64_t seed, std::uint64_t counter)
        : state_(splitmix64(splitmix64(seed) ^
                            (counter + 1) * 0x9e3779b97f4a7c15ULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [lo, hi], both inclusive.
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int offset = static_cast<int>(next_double() * span);
        if (offset >= span) offset = span - 1;
        return lo + offset;
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

} // namespace shootcalc
