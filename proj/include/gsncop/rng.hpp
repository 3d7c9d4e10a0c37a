#ifndef GSNCOP_RNG_HPP
#define GSNCOP_RNG_HPP

#include <cstdint>
#include <random>

namespace gsncop {

/// Reproducible random stream.  Streams with equal (seed, stream_id) yield
/// identical sequences; distinct stream ids give statistically independent
/// streams suitable for parallel replications.  A stream must not be shared
/// across threads; give each worker its own stream_id instead.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Uniform draw on (0,1) (both endpoints excluded).
    double uniform01();

    /// Standard normal draw via the inverse CDF, so sequences are
    /// platform independent given the same engine output.
    double normal();

    /// Geometric count on {1,2,...} with success probability p in (0,1].
    std::uint64_t geometric(double p);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

} // namespace gsncop

#endif
