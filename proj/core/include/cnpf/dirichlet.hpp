#pragma once

#include <cstdint>
#include <vector>

#include "cnpf/common.hpp"
#include "cnpf/quadrature.hpp"
#include "cnpf/series.hpp"

namespace cnpf {

/// Weighted Dirichlet space machinery on the unit disc: diagonal kernel
/// coefficients c_n^alpha, the boundary-normalized kernel function s_1^alpha,
/// local Dirichlet integrals, the harmonic-weight measure mu_alpha, the
/// Shimorin decomposition of Re V_f, Blaschke products, and the growth
/// demonstration for Re V under Blaschke composition.

/// Diagonal coefficients of the weighted Dirichlet kernel,
/// c_n = 1 / (1 + n * n! * Gamma(alpha+1) / Gamma(n+1+alpha)),
/// together with the asymptotic band of c_n * (n+1)^(1-alpha).
struct DAlphaKernel {
  Real alpha = 0.5;
  std::vector<Real> coeffs;  ///< c_0..c_N
  Real band_lo = 0;          ///< min over n of c_n * (n+1)^(1-alpha)
  Real band_hi = 0;          ///< max over n of c_n * (n+1)^(1-alpha)
};

/// Build the coefficient table up to degree max_degree.
/// Throws AlphaOutOfRange unless alpha lies in (0,1).
DAlphaKernel dalpha_coeffs(Real alpha, int max_degree);

/// Partial-sum evaluation of s_1^alpha(z) = sum_n c_n^alpha z^n with an
/// explicit geometric tail bound c_N |z|^(N+1) / (1 - |z|).
struct S1Value {
  Complex value{};
  Real tail_bound = 0;
  int terms = 0;
};

/// Evaluate by direct partial sum.  Throws TailTooLarge when the tail bound
/// exceeds 1e-8 of the partial sum magnitude, and PointOutsideDomain for
/// |z| >= 1.
S1Value s1_eval(Real alpha, Complex z, int max_terms = 4000);

/// High-accuracy evaluation of s_1^alpha near the boundary: an exact head sum
/// plus an Euler--Maclaurin tail (integral via exponentially weighted panel
/// quadrature, with the h/2 and h'/12 corrections).  Valid for z inside the
/// disc with |arg(-log z)| bounded away from pi/2; in particular for all real
/// x in [0,1).  Accuracy ~1e-11 relative.
Complex s1_accurate(Real alpha, Complex z);

/// Radial derivative (s_1^alpha)'(x) for real x in [0,1), same scheme.
Real s1_deriv_accurate(Real alpha, Real x);

/// Report of the qualitative properties of s_1^alpha: real part above 1/2,
/// the (1-r)^alpha growth band, the derivative band, and a sector lower
/// bound Re s_1^alpha(z) >= delta * (1-|z|)^(-alpha) on
/// S = { |z - |z|| < eps * (1 - |z|) } with empirically calibrated (eps, delta).
struct S1Properties {
  Real alpha = 0;
  Real min_re = 0;       ///< min Re s_1^alpha over the disc grid (want > 1/2)
  Real ratio_lo = 0;     ///< band of s_1^alpha(r) * (1-r)^alpha on [0.9, 0.999]
  Real ratio_hi = 0;
  Real deriv_ratio_lo = 0;  ///< band of (1-r)^(alpha+1) * (s_1^alpha)'(r)
  Real deriv_ratio_hi = 0;
  Real eps_sector = 0;      ///< calibrated sector half-aperture coefficient
  Real delta_sector = 0;    ///< calibrated sector lower-bound constant
  bool sector_ok = false;
  bool pass = false;
};

S1Properties s1_properties_check(Real alpha, int grid = 48,
                                 std::uint64_t seed = 0x51a150ULL);

/// The contractive symbol f = 1 - 1/s_1^alpha as a truncated power series
/// (f(0) = 0 exactly; |f| < 1 on the disc since Re s_1^alpha > 1/2).
Series f_contractive(Real alpha, int order);

/// Local Dirichlet integral D_zeta(f) = sum_j |q_j|^2 where
/// q_j = sum_{m >= j+1} f_m zeta^(m-1-j) are the coefficients of the divided
/// difference (f(z) - f(zeta)) / (z - zeta).  Exact for polynomials.
/// Throws PointOutsideDomain for |zeta| > 1 and NotUnivariate for dim > 1.
Real local_dirichlet(const Series& f, Complex zeta);

/// Quadrature discretization of the measure
///   d(mu_alpha) = alpha * (1 - alpha |z|^2) * (1 - |z|^2)^(alpha-1) dA / pi,
/// the harmonic weight for which the D(mu) norm reproduces the D_alpha norm.
/// Radial rule: Gauss--Jacobi in t = r^2 with weight (1-t)^(alpha-1), exact
/// for polynomial radial profiles; angular rule: uniform.
DiscMeasure mu_alpha(Real alpha, int radial_nodes = 256,
                     int angular_nodes = 256);

/// Exact radial moments rho_p = integral of |z|^(2p) d(mu_alpha)
///   = alpha * (B(p+1, alpha) - alpha * B(p+2, alpha)),
/// for p = 0..max_p.
std::vector<Real> mu_alpha_moments(Real alpha, int max_p);

/// Shimorin decomposition of the Sarason function for D_alpha:
///   Re V_f(z) = Poisson[|f|^2](z)
///             + integral of (2 Re s^alpha(z conj(zeta)) - 1) D_zeta(f) d mu(zeta).
/// The Poisson term is evaluated exactly from the coefficient autocorrelation;
/// the measure term is summed over the nodes of mu.  Throws
/// QuadratureBudgetExceeded when a node would require more than max_terms
/// kernel terms to meet the tail tolerance.
Real shimorin_re_v(Real alpha, const Series& f, Complex z,
                   const DiscMeasure& mu, int max_terms = 200000);

/// Same quantity for real z = r via exact moments of mu_alpha: both terms
/// reduce to coefficient correlations against closed-form Beta moments, so
/// the result is exact for polynomial f up to rounding.
Real shimorin_re_v_exact(Real alpha, const Series& f, Real r);

/// Finite Blaschke product with real zeros in [0,1):
///   B(z) = prod_n (z_n - z) / (1 - z_n z).
class Blaschke {
 public:
  /// Zeros must be distinct and lie in [0,1); they are stored sorted.
  explicit Blaschke(std::vector<Real> zeros);

  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;

  /// B'(z_n) by the product-of-others formula,
  /// -1/(1 - z_n^2) * prod_{m != n} (z_m - z_n)/(1 - z_m z_n).
  Real deriv_at_zero(int n) const;

  /// Carleson separation quantity min_n (1 - z_n^2) |B'(z_n)|.
  Real delta() const;

  const std::vector<Real>& zeros() const { return zeros_; }

 private:
  std::vector<Real> zeros_;
};

/// Carleson separation quantity of a zero set without building the product.
Real interpolation_delta(const std::vector<Real>& zeros);

/// Solve s_1^alpha(w) = 1/(1 - z) for w in [0,1) by bisection (the left side
/// has positive coefficients, hence is increasing).  Throws TargetOutOfRange
/// when the target exceeds the reliably computable range of s_1^alpha.
Real find_w(Real alpha, Real z);

/// One row of the Re V growth table: prefix length n, the Blaschke zero z_n,
/// its preimage w_n = f^(-1)(z_n), the per-term factor
/// t_n = (1 - w_n) (s_1^alpha)'(w_n) / s_1^alpha(w_n), the partial sum
/// S_n = sum_{m <= n} (1 - w_m)^2 |(B o f)'(w_m)|^2 (B fixed at the full zero
/// set, as in the disjoint-disc lower bound), and the sup over the radial
/// grid of Re V for u_n = B_n o f with B_n the n-term prefix product.
struct UnboundedRow {
  int n = 0;
  Real z_n = 0;
  Real w_n = 0;
  Real t_n = 0;
  Real s_n = 0;
  Real sup_re_v = 0;
  Real r_at_sup = 0;
};

struct UnboundedDemo {
  Real alpha = 0.5;
  int max_zeros = 12;
  int series_order = 0;            ///< effective truncation-order cap
  Real baseline_sup_re_v = 0;  ///< sup Re V_f (no Blaschke factor)
  Real baseline_r_at_sup = 0;
  std::vector<UnboundedRow> rows;  ///< n = 1..max_zeros
  std::vector<Real> r_grid;        ///< radii of the Re V curves below
  std::vector<Real> baseline_re_v;             ///< Re V_f over r_grid
  std::vector<std::vector<Real>> re_v_curves;  ///< per row n, over r_grid
  Real delta = 0;                  ///< separation quantity of the full zero set
  Real t_floor = 0;                ///< min t_n over the calibration prefix n <= 5
  bool t_ok = false;               ///< every t_n >= t_floor / 2
  bool s_increasing = false;       ///< S_n strictly increasing
  bool s_increment_ok = false;     ///< n-th new term >= (delta^2/4) min_m t_m^2
  Real growth_ratio = 0;           ///< sup Re V at n = max_zeros over n = 1
  bool growth_increasing = false;  ///< sup Re V nondecreasing in n
  Real cross_check_rel_dev = 0;    ///< coefficient rule vs. Shimorin moments
  std::vector<Real> estimate_below_ratios;  ///< (norm^2 + sup Re V) / sector energy
  bool estimate_below_positive = false;
  bool pass = false;
};

/// Growth demonstration: zeros z_n = 1 - 2^(-n), n = 1..max_zeros, composed
/// with f = 1 - 1/s_1^alpha.  Tabulates t_n, S_n, and the sup of Re V_{B_n o f}
/// over the radial grid {0} union {1 - 2^-k, k = 1..16}.
///
/// Re V is the Shimorin decomposition over the discretized measure (1024
/// Gauss-Jacobi radial rings x 256 angles): the Poisson extension of |u|^2
/// from the coefficient autocorrelation, plus per-node kernel-weighted local
/// Dirichlet integrals.  Per ring, the local Dirichlet values are folded into
/// angular-mean DFT bins via the weighted-minus-plain autocorrelations
/// H_d = (A_d - W_d)/(1 - rho^2), so each grid radius costs one kernel sum
/// per ring rather than one series evaluation per node.  Autocorrelation lags
/// damped below working precision by rho^d are dropped, which keeps the deep
/// rings affordable at long truncations.  The coefficient rule is
/// cross-checked against the exact-moment route on a short truncation.
///
/// The zero z_n pulls back to w_n with 1 - w_n ~ 4^-n, and the discretized
/// Re V of the n-step chain only registers the n-th factor once the
/// truncation order reaches a small multiple of 4^n; the prefix chain is
/// truncated at per-step order min(cap, max(2^18, 32 * 4^n)) where cap is
/// series_order clamped to [4096, 2^24] and snapped to a power-of-two length.
/// Orders past the cap are out of reach, so the sup column saturates once
/// 32 * 4^n exceeds the cap: with the default cap 2^23 the tabulated sup
/// grows through n = 10, and the deepest two rows fall off as those zeros
/// outrun the truncation and measure-depth budget.  The run takes on the
/// order of a minute at the default cap.
UnboundedDemo unbounded_demo(Real alpha = 0.5, int max_zeros = 12,
                             int series_order = 1 << 23);

}  // namespace cnpf
