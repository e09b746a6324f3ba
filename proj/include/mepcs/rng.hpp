#pragma once

#include <cmath>
#include <cstdint>

namespace mepcs {

// splitmix64 finalizer. Bijective on uint64, strong avalanche; the basis of
// every random stream in the library so that results are reproducible across
// platforms and thread schedules.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Child-seed derivation: hash the parent seed together with up to three
// counters. Every independent unit of work (trial, restart, matrix, ...)
// gets its own stream via a distinct counter path.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

inline double to_unit_interval(std::uint64_t bits) {
    // 53-bit mantissa, offset by half an ulp: strictly inside (0, 1).
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Sequential generator (splitmix64 stream).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_++); }

    // Uniform in (0, 1).
    double next_unit() { return to_unit_interval(next_u64()); }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
    }

    // Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant here.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller; consumes exactly two words.
    double next_normal() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

// Counter-addressed standard normal: entry `index` of the stream keyed by
// `seed`. Any entry can be generated independently of the others, so matrix
// fills are order-independent.
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t key = splitmix64(seed);
    const double u1 = to_unit_interval(splitmix64(key ^ (2 * index + 1)));
    const double u2 = to_unit_interval(splitmix64(key ^ (2 * index + 2)));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace mepcs
