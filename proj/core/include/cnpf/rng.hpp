#pragma once

#include <cstdint>
#include <vector>

#include "cnpf/common.hpp"

namespace cnpf {

/// xoshiro256++ generator (Blackman & Vigna).  The whole stream is a pure
/// function of the 64-bit seed, which is what makes every randomized check
/// in the test suite reproducible byte for byte.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) using the top 53 bits.
    double next_double();

    /// Standard normal via Box-Muller (consumes two uniforms per pair).
    double next_normal();

    /// Standard complex normal: independent N(0, 1/2) real and imaginary
    /// parts, so E|z|^2 = 1.
    Complex next_complex_normal();

    /// Derives an independent generator for trial index i; parallel and
    /// serial trial loops therefore agree bitwise.
    Xoshiro256 split(std::uint64_t index) const;

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Uniform point in the real 2d-ball of the given radius (the complex
/// d-ball), via normalized Gaussian direction times U^(1/2d) radius.
std::vector<Complex> random_ball_point(Xoshiro256& rng, int dim, double radius);

/// Uniform point in the polydisc: each coordinate uniform in the disc of the
/// given radius (direction uniform angle, radius sqrt(U)).
std::vector<Complex> random_polydisc_point(Xoshiro256& rng, int dim, double radius);

}  // namespace cnpf
