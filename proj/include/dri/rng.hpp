#pragma once

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

namespace dri {

// Deterministic randomness utilities.
//
// std::mt19937_64 is bit-exact across implementations, but the standard's
// distribution adaptors (uniform_int_distribution, normal_distribution, ...)
// are implementation-defined. Every draw here therefore goes through fixed,
// hand-specified algorithms so that identical seeds give identical streams on
// any conforming toolchain — a requirement for the byte-reproducibility
// contracts of the simulation runners.

/// SplitMix64 finalizer: a high-quality 64-bit bijective mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derive a sub-seed from a master seed and a list of stream coordinates
/// (design parameters, replication index, stream tag, ...). Folding each part
/// through mix64 makes the sub-seed independent of scheduling: a replication's
/// stream depends only on its coordinates, never on execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = mix64(master);
    for (std::uint64_t p : parts) s = mix64(s ^ p);
    return s;
}

/// Deterministic RNG: mt19937_64 plus fixed-algorithm draw helpers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi], inclusive; rejection sampling avoids
    /// modulo bias. Requires lo <= hi.
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        const std::uint64_t bound = (UINT64_MAX / range) * range;
        std::uint64_t x = engine_();
        while (x >= bound) x = engine_();
        return lo + static_cast<int>(x % range);
    }

    /// Standard normal via Box-Muller (cosine branch). Two uniforms per draw;
    /// stateless, so the stream layout is position-independent.
    double normal() {
        const double u1 = 1.0 - uniform_unit();  // (0, 1], keeps log() finite
        const double u2 = uniform_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i - 1)));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Uniform random permutation of 1..p.
    std::vector<int> permutation(int p) {
        std::vector<int> perm(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
        shuffle(perm);
        return perm;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace dri
