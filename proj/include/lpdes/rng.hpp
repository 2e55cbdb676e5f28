#pragma once

// SplitMix64 (Steele, Lea, Flood 2014). Small, seedable and defined by a few
// lines of integer arithmetic, so instances can be regenerated elsewhere.

#include <cstdint>

namespace lpdes {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection; n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        for (;;) {
            const std::uint64_t v = next();
            if (v < limit) return v % n;
        }
    }

    // UniformRandomBitGenerator interface
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }

private:
    std::uint64_t state_;
};

// Seed of trial i under a master seed: the (i+1)-th output of SplitMix64(master).
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i) {
    SplitMix64 g(master);
    std::uint64_t s = 0;
    for (std::uint64_t k = 0; k <= i; ++k) s = g.next();
    return s;
}

} // namespace lpdes
