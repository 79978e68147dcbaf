#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "mintau/vec.hpp"

namespace mintau {

// Deterministic generator with hand-rolled distributions. std::uniform_real_distribution
// is implementation-defined, which would break the byte-identical-output guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {
        // warm up so that small seeds diverge quickly
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    // isotropic unit vector, n in {1, 2, 3}
    Point unit_vector(int n) {
        if (n == 1) return {uniform() < 0.5 ? -1.0 : 1.0};
        if (n == 2) {
            double th = uniform(0.0, 2.0 * std::numbers::pi);
            return {std::cos(th), std::sin(th)};
        }
        double z = uniform(-1.0, 1.0);
        double th = uniform(0.0, 2.0 * std::numbers::pi);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(th), r * std::sin(th), z};
    }

private:
    std::uint64_t state_;
};

}  // namespace mintau
