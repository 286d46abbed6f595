#include "pelve/random.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

namespace pelve {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix64(seed ^ splitmix64(stream ^ 0xD1B54A32D192ED03ULL))) {}

PathRng::result_type PathRng::operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double PathRng::uniform() {
    // 53 random bits, shifted by half an ulp so 0 and 1 are excluded.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double PathRng::normal() {
    static const boost::math::normal_distribution<double> z;
    return boost::math::quantile(z, uniform());
}

double PathRng::gamma(double shape, double scale) {
    if (shape < 1.0) {
        // Boost to shape + 1 and correct with U^(1/shape).
        const double u = uniform();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

}  // namespace pelve
