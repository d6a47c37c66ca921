#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace taox {

/// splitmix64 finalizer; spreads seed entropy across all output bits.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for an independent named substream (per sweep cell, per cycle).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    return mix64(root ^ mix64(stream));
}

/// Standard normal samples via Box-Muller over mt19937_64. Hand-rolled since
/// std::normal_distribution is implementation-defined and would break
/// byte-identical outputs across standard libraries.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - std::ldexp(static_cast<double>(engine_() >> 11), -53);  // (0, 1]
        double u2 = std::ldexp(static_cast<double>(engine_() >> 11), -53);        // [0, 1)
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Multiplicative lognormal factor with unit mean: exp(-s^2/2 + s z).
inline double mean_one_lognormal(NormalSampler& normal, double sigma) {
    return std::exp(-0.5 * sigma * sigma + sigma * normal());
}

} // namespace taox
