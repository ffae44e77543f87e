#include "cnpf/rng.hpp"

#include <cmath>

namespace cnpf {
namespace {

// splitmix64: seeds the xoshiro state and derives split streams.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

void Xoshiro256::reseed(std::uint64_t seed) {
    seed_ = seed;
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
    have_spare_ = false;
}

std::uint64_t Xoshiro256::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Xoshiro256::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u clamped away from 0 so log is finite.
    double u = next_double();
    if (u < 0x1.0p-60) u = 0x1.0p-60;
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

Complex Xoshiro256::next_complex_normal() {
    const double re = next_normal();
    const double im = next_normal();
    return Complex(re * 0.7071067811865475244, im * 0.7071067811865475244);
}

Xoshiro256 Xoshiro256::split(std::uint64_t index) const {
    std::uint64_t x = seed_ ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL);
    return Xoshiro256(splitmix64(x));
}

std::vector<Complex> random_ball_point(Xoshiro256& rng, int dim, double radius) {
    // Gaussian direction / norm, scaled by U^(1/2d): uniform in the 2d-ball.
    std::vector<Complex> z(static_cast<std::size_t>(dim));
    double norm_sq = 0.0;
    for (auto& c : z) {
        c = Complex(rng.next_normal(), rng.next_normal());
        norm_sq += std::norm(c);
    }
    if (norm_sq == 0.0) norm_sq = 1.0;
    const double u = rng.next_double();
    const double scale =
        radius * std::pow(u, 1.0 / (2.0 * dim)) / std::sqrt(norm_sq);
    for (auto& c : z) c *= scale;
    return z;
}

std::vector<Complex> random_polydisc_point(Xoshiro256& rng, int dim, double radius) {
    std::vector<Complex> z(static_cast<std::size_t>(dim));
    for (auto& c : z) {
        const double r = radius * std::sqrt(rng.next_double());
        const double theta = 6.283185307179586476925286766559 * rng.next_double();
        c = Complex(r * std::cos(theta), r * std::sin(theta));
    }
    return z;
}

}  // namespace cnpf
