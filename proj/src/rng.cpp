#include "qmix/rng.hpp"

#include <cmath>
#include <numbers>

namespace qmix {

double RandomStream::exponential() { return -std::log1p(-uniform()); }

double RandomStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

RandomStream split_stream(const SeedSpec& seed, std::uint64_t chunk) {
    std::uint64_t h = RandomStream::mix(seed.master_seed + 0x9E3779B97F4A7C15ull);
    h = RandomStream::mix(h ^ (seed.stream_index + 0xBF58476D1CE4E5B9ull));
    h = RandomStream::mix(h ^ (chunk + 0x94D049BB133111EBull));
    return RandomStream(h);
}

}  // namespace qmix
