#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dynsamp {

// Mix a base seed with a list of stream identifiers into a new 64-bit seed.
// Distinct identifier lists give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

// Platform-stable random source. The engine is std::mt19937_64 (its output
// sequence is fixed by the standard); the conversions to uniform and normal
// variates are done here because std::*_distribution is
// implementation-defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Standard normal (Box-Muller, both variates used).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace dynsamp
