#include "dynsamp/random.hpp"

#include <cmath>
#include <numbers>

namespace dynsamp {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
{
    std::uint64_t h = splitmix64(seed);
    for (auto s : stream)
        h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
    return h;
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double RandomStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 1 - u lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

} // namespace dynsamp
