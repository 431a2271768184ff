#pragma once

#include <cstdint>

#include "gaussian.hpp"

namespace qh {

// Counter-based generator: value at (index, stream) is a pure function of the key,
// so estimates are reproducible regardless of evaluation order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Uniform draw in (0, 1), open at both ends.
    double uniform(std::uint64_t index, std::uint64_t stream) const {
        std::uint64_t z = mix(mix(seed_ + 0x9e3779b97f4a7c15ull * stream) + index);
        return ((z >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(std::uint64_t index, std::uint64_t stream) const {
        return norm_quantile(uniform(index, stream));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

}  // namespace qh
