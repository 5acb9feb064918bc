#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace cogevo {

// 64-bit FNV-1a, used for token hashing and file/content fingerprints.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stable per-step seed: independent of student processing order, so
// parallel cohort runs and reruns produce identical draws.
inline uint64_t derive_seed(uint64_t master, std::string_view student_id, uint64_t t) {
    uint64_t h = splitmix64(master ^ fnv1a64(student_id));
    return splitmix64(h ^ (t * 0x9E3779B97F4A7C15ULL));
}

// Deterministic generator (xoshiro-free: splitmix64 stream) with hand-rolled
// distributions. std::*_distribution is implementation-defined, which would
// break byte-identical logs across toolchains; everything here is pinned.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(splitmix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Uniform in [0,1) with 53 bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Unbiased integer in [0, n) via 128-bit multiply-shift.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool bernoulli(double p) {
        return uniform01() < p;
    }

    // Box-Muller, first branch only; u1 shifted into (0,1] so log is finite.
    double normal() {
        double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    // Truncated normal by rejection (deterministic given the stream).
    double normal_trunc(double mean, double stddev, double lo, double hi) {
        for (;;) {
            double x = normal(mean, stddev);
            if (x >= lo && x <= hi) return x;
        }
    }

    // Marsaglia-Tsang for shape >= 1, boosted below 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    uint64_t state_;
};

} // namespace cogevo
