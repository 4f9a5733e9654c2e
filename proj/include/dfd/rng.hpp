#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dfd {

// Deterministic random source. mt19937_64 is fully specified by the standard;
// the transforms below avoid std::*_distribution, whose output is
// implementation-defined, so identical seeds give identical streams anywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

    // Standard normal via Box-Muller; the spare is discarded so consumption
    // is exactly two uniforms per draw.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace dfd
