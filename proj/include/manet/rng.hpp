#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace manet {

// splitmix64 step; also used as a finalizer for key mixing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) { return splitmix64(x); }

// Order-sensitive key combiner for deriving independent streams.
inline std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (std::uint64_t k : keys) {
        h ^= mix64(k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
    return h;
}

inline double u01_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Small deterministic generator. Portable across platforms and compilers:
// all sampling is done from raw 64-bit draws, no std::*_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // [0, 1)
    double uniform01() { return u01_from_bits(next_u64()); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // [0, n)
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Box-Muller; each call consumes exactly two draws.
    double gauss(double sigma) {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform01();
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t state_;
};

// Stateless stream derivation: same keys, same stream, regardless of the
// order work items are executed in. This is what keeps the parallel batch
// kernels bit-identical to the serial reference.
inline Rng derived_rng(std::initializer_list<std::uint64_t> keys) {
    return Rng(mix_keys(keys));
}

}  // namespace manet
