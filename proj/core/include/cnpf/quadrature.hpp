#pragma once

#include <cstdint>
#include <vector>

#include "cnpf/common.hpp"
#include "cnpf/kernel.hpp"
#include "cnpf/series.hpp"

namespace cnpf {

struct Quadrature1D {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton refinement of Chebyshev
/// initial guesses; deterministic to the last bit).
Quadrature1D gauss_legendre(int n);

/// Same rule affinely mapped to [a, b].
Quadrature1D gauss_legendre_ab(int n, Real a, Real b);

/// n-point rule with sum_i w_i g(t_i) = int_0^1 (1-t)^beta g(t) dt exactly
/// for polynomials g of degree < 2n (Golub-Welsch on the Jacobi recurrence);
/// beta > -1, so endpoint singularities of this form are handled exactly.
Quadrature1D gauss_jacobi01(int n, Real beta);

/// Finitely supported positive measure on the closed unit disc.
struct DiscMeasure {
    std::vector<Complex> nodes;
    std::vector<Real> weights;
    Real mass() const;
};

DiscMeasure point_mass(Complex at, Real weight = 1);

/// Normalized area measure (1/pi) dA restricted to the disc, as a
/// radial-times-angular rule with the given node counts.
DiscMeasure area_measure(int radial_nodes, int angular_nodes);

/// Numerical V_F(z) = int |F(w)|^2 (1 + <z,w>)/(1 - <z,w>) dm(w) for the
/// measure-defined spaces: BergmanDiscWeighted (radial Gauss-Jacobi times
/// angular trapezoid) and HardyBall d <= 2 (sphere rule; d = 1 is the
/// boundary circle).  Used to cross-validate the coefficient rule.
std::vector<Complex> sarason_by_quadrature(const KernelSpec& space, const VectorSeries& F,
                                           const std::vector<std::vector<Complex>>& grid,
                                           int radial_nodes = 48, int angular_nodes = 128);

/// Carleson-type check for a univariate factor kernel s: the sup of
/// Re int s_z dmu over a boundary-approaching grid, and the best constant C
/// with |p|^2_{L2(mu)} <= C |p|^2_s over polynomials of degree <= f_degree
/// (generalized eigenvalue problem), cross-checked on seeded random p.
struct CarlesonReport {
    Real sup_re = 0;
    Real embedding_constant = 0;
    Real sampled_max_ratio = 0;  ///< over the random trials; <= embedding_constant
    bool sampled_consistent = false;
};
CarlesonReport carleson_check(const KernelSpec& s, const DiscMeasure& mu, int f_degree,
                              int trials, std::uint64_t seed, Real grid_max_radius = 0.999,
                              int grid_angles = 64);

}  // namespace cnpf
