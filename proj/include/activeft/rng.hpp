#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

// Seeded randomness helpers.  The engine is std::mt19937_64 (fully specified
// by the standard); the distributions are hand-rolled because the standard
// library leaves distribution algorithms implementation-defined, which would
// break bit-reproducibility of seeded runs across toolchains.

namespace activeft::rng {

using Engine = std::mt19937_64;

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1), 53 bits.
inline double next_unit(Engine& e) {
    return double(e() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), unbiased via rejection.
inline uint64_t next_below(Engine& e, uint64_t n) {
    const uint64_t limit = ~uint64_t(0) - ~uint64_t(0) % n;
    uint64_t x;
    do {
        x = e();
    } while (x >= limit);
    return x % n;
}

// Standard normals via Box-Muller, consumed pairwise.
inline void fill_gaussian(std::span<double> out, Engine& e) {
    for (size_t i = 0; i < out.size(); i += 2) {
        double u1;
        do {
            u1 = next_unit(e);
        } while (u1 <= 0.0);
        const double u2 = next_unit(e);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        out[i] = r * std::cos(a);
        if (i + 1 < out.size()) out[i + 1] = r * std::sin(a);
    }
}

// First k entries of a seeded partial Fisher-Yates shuffle of [0, n).
inline std::vector<uint32_t> sample_without_replacement(uint32_t n, uint32_t k, Engine& e) {
    std::vector<uint32_t> idx(n);
    for (uint32_t i = 0; i < n; ++i) idx[i] = i;
    for (uint32_t i = 0; i < k; ++i) {
        const uint32_t j = i + uint32_t(next_below(e, n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

// In-place variant for repeated draws from the same index array.
inline void partial_shuffle(std::span<uint32_t> idx, uint32_t k, Engine& e) {
    const uint32_t n = uint32_t(idx.size());
    for (uint32_t i = 0; i < k; ++i) {
        const uint32_t j = i + uint32_t(next_below(e, n - i));
        std::swap(idx[i], idx[j]);
    }
}

}  // namespace activeft::rng
