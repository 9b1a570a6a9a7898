#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oscp {

// Seeded randomness used for dataset splits and synthetic generation.
// std::shuffle and std::normal_distribution produce implementation-defined
// sequences, so the draws are spelled out here to keep artifacts reproducible
// across standard libraries. mt19937_64 itself is fully specified.

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Modulo reduction; bias is negligible
    /// for the bounds used here (dataset sizes).
    std::uint64_t next_below(std::uint64_t bound) {
        return gen_() % bound;
    }

    /// Standard normal via Box-Muller (cosine branch).
    double next_gaussian() {
        double u1 = 1.0 - next_unit(); // (0, 1]
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Fisher-Yates shuffle with explicit draws.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace oscp
