#pragma once

// Counter-derived random streams: stream k of seed s is a SplitMix64 sequence
// whose starting state depends only on (s, k). Simulations key one stream per
// Monte-Carlo path, so results do not depend on how paths are distributed
// over workers.

#include <cstdint>
#include <limits>

namespace pelve {

class PathRng {
public:
    using result_type = std::uint64_t;

    PathRng(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    // Uniform on the open interval (0,1).
    double uniform();
    // Standard normal by inversion.
    double normal();
    // Gamma with the given shape and scale (Marsaglia-Tsang squeeze).
    double gamma(double shape, double scale);

private:
    std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pelve
