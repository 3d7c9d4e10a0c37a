#include "gsncop/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "gsncop/normal.hpp"

namespace gsncop {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream_id * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x2545F4914F6CDD1DULL);
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(mix_seed(seed, stream_id)) {}

double RandomStream::uniform01() {
    // 53-bit mantissa shifted into (0,1): never returns an exact endpoint.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return norm_quantile(uniform01()); }

std::uint64_t RandomStream::geometric(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("RandomStream::geometric: p must be in (0,1]");
    }
    if (p == 1.0) return 1;
    const double u = uniform01();
    const double n = std::floor(std::log(u) / std::log1p(-p));
    return 1 + static_cast<std::uint64_t>(n);
}

} // namespace gsncop
