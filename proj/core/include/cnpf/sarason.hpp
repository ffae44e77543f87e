#pragma once

#include <optional>
#include <vector>

#include "cnpf/kernel.hpp"
#include "cnpf/psd.hpp"
#include "cnpf/series.hpp"

namespace cnpf {

/// V_F = 2<F, s_z F>_k - |F|^2 as a polynomial: the Sarason function of a
/// polynomial F in H_k (vector-valued), taken against the factor kernel s.
struct SarasonData {
    Series v;          ///< exact polynomial of degree <= deg F (zero-padded to N)
    Real norm_sq = 0;  ///< |F|^2 in H_k
    KernelSpec k;
    KernelSpec s;
};

/// Coefficient rule: v_g = 2 c^s_g sum_{i,d} conj(F^i_d) F^i_{d+g} / c^k_{d+g}
/// for g != 0 and v_0 = |F|^2.  Exact for diagonal kernels in any d <= 3;
/// requires both kernels diagonal on the same domain.
SarasonData sarason_function(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                             int N = -1);

/// Independent oracle: V_F(z) = 2<F, s_z F>_k - |F|^2 evaluated by building
/// the series of s_z directly and taking coefficient inner products (exact,
/// since only coefficients up to deg F enter).
Complex sarason_oracle_value(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                             const std::vector<Complex>& z);

/// Output of the a-factorization F = Re(a) Phi_a / (1 - psi_a) with
/// psi_a = (V - a)/(V + conj a), Phi_a = 2F/(V + conj a).
struct Factorization {
    Complex a{1, 0};
    Series psi;
    VectorSeries phi;      ///< rows of F (+1 embedded component when used)
    SarasonData sarason;   ///< the V used (after embedding, if any)
    Real reconstruction_residual = 0;  ///< max_z |F(z) - Re(a) Phi/(1-psi)|
    Real contractivity_margin = 0;     ///< min slack from the default check
    Complex psi_at_base{0, 0};         ///< psi(0)
    bool embedded = false;
    std::vector<Complex> embed_w;      ///< embedding point when embedded
    int base_rows = 0;                 ///< rows of the original F
};

/// a-factorization of F (Re a > 0).  out_order defaults to
/// max(4 deg F, 64).  With embed_w set, the sub-unit embedding is used:
/// V <- V + (1 - |F|^2)(2 s_w - 1) and Phi gains the component
/// 2 sqrt(1-|F|^2) k_w / sqrt(k(w,w)) / (V + conj a).
Factorization factorize(const VectorSeries& F, Complex a, const KernelSpec& k,
                        const KernelSpec& s, int out_order = -1,
                        const std::optional<std::vector<Complex>>& embed_w = std::nullopt);

/// factorize with a = 1 for unit-norm F; throws NotUnitNorm otherwise
/// (pass embed_w to use the sub-unit embedding instead).
Factorization factorize_unit(const VectorSeries& F, const KernelSpec& k, const KernelSpec& s,
                             int out_order = -1,
                             const std::optional<std::vector<Complex>>& embed_w = std::nullopt);

/// Seeded check of |psi h|_s^2 + Re(a) |Phi h|_k^2 <= |h|_s^2 over random
/// normalized polynomials h.  Truncating the products only shrinks the left
/// side, so a pass is conservative.
struct ContractivityReport {
    Real min_slack = 0;      ///< min over trials of rhs - lhs (h normalized)
    int worst_trial = -1;
    int trials = 0;
    int h_degree = 0;
    bool pass = false;
};
ContractivityReport contractivity_check(const Factorization& fact, const KernelSpec& s,
                                        const KernelSpec& k, int trials, std::uint64_t seed,
                                        int h_degree = 20, Real tol = 1e-6);

/// F^r = Phi / (1 - r psi) plus the inequality
/// |F^r h|_k^2 <= Re<(1+r psi)/(1-r psi) h, h>_s over sampled h, and
/// |F^r - F|_k when F is supplied.
struct RApproxReport {
    VectorSeries f_r;
    Real min_slack = 0;       ///< min over sampled h of rhs - lhs
    Real distance_to_f = -1;  ///< |F^r - F|_k; -1 when F not supplied
    bool pass = false;
};
RApproxReport r_approximant(const Factorization& fact, Real r, const KernelSpec& s,
                            const KernelSpec& k, int trials = 20, std::uint64_t seed = 7,
                            const VectorSeries* F = nullptr, Real tol = 1e-8);

/// PSD test of the matrix
///   <s_{z_i}F, F> + <F, s_{z_j}F> - |F|^2 - <s_{z_i}F, s_{z_j}F> / s(z_j, z_i)
/// at the given points (the harmonic-majorant generalization).
PsdReport main_lemma_psd(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                         const std::vector<std::vector<Complex>>& pts, Real tol = 1e-10,
                         int tail_order = -1);

/// Per-point check of (s(z,z)/k(z,z)) |F(z)|^2 <= Re V_F(z); for k = s the
/// middle term |s_z F|^2 / s(z,z) is included.
struct MajorantRow {
    std::vector<Complex> z;
    Real lhs = 0;
    Real middle = 0;  ///< NaN when k != s
    Real rhs = 0;
    bool pass = false;
};
std::vector<MajorantRow> majorant_check(const KernelSpec& k, const KernelSpec& s,
                                        const VectorSeries& F,
                                        const std::vector<std::vector<Complex>>& grid,
                                        Real tol = 1e-10, int tail_order = -1);

/// Max deviation of <z^g F, F>_k from delta_{g,0} over |g| <= max_degree
/// (the extremal-function property for unit-norm F).
struct ExtremalReport {
    Real max_deviation = 0;
    bool extremal = false;
};
ExtremalReport extremal_check(const KernelSpec& k, const VectorSeries& F, int max_degree,
                              Real tol = 1e-10);

/// Pointwise bounds for extremal F: |F(z)|^2 <= k(z,z)/s(z,z) always, and
/// the ball variant |F(z)|^2 <= (1-|z|^2) k(z,z) when (1-|z|^2) s(z,z) >= 1
/// (exact for the Szego/Drury-Arveson factor).
struct ExtremalBoundRow {
    std::vector<Complex> z;
    Real value_sq = 0;
    Real bound_quotient = 0;
    Real bound_ball = 0;
    bool ball_applicable = false;
    bool pass = false;
};
std::vector<ExtremalBoundRow> extremal_bound_check(const KernelSpec& k, const KernelSpec& s,
                                                   const VectorSeries& F,
                                                   const std::vector<std::vector<Complex>>& grid,
                                                   Real tol = 1e-10);

/// PSD test of L(z_i, z_j) = s(z_j, z_i) [g(z_j) + conj(g(z_i))]
/// - 2 <s_{z_i}F, s_{z_j}F>_k with g = (1+psi)/(1-psi), plus the recovery
/// check g = V_F and |L(z, z_0)| ~ 0 when psi(z_0) = 0.
struct UniquenessReport {
    PsdReport psd;
    Real max_l_z0 = 0;        ///< max_i |L(z_i, z_0)|
    Real max_recovery_dev = 0;  ///< max_i |g(z_i) - V_F(z_i)|
    bool pass = false;
};
UniquenessReport uniqueness_kernel_psd(const KernelSpec& k, const KernelSpec& s,
                                       const VectorSeries& F, const Series& psi,
                                       const std::vector<std::vector<Complex>>& pts,
                                       Real tol = 1e-10, int tail_order = -1);

/// Largest singular value of the finite-section multiplication map
/// p (deg <= degree, s-norm) -> F p (k-norm): a lower bound for the
/// multiplier norm of F from H_s to H_k.
Real multiplier_norm_lower_bound(const VectorSeries& F, const KernelSpec& s, const KernelSpec& k,
                                 int degree);

/// One row of the boundedness experiment: sup of Re V_F over a seeded grid
/// against the finite-section multiplier lower bound.
struct DiffOpRow {
    Real sup_re_v = 0;
    Real mult_lower_bound = 0;
};
DiffOpRow diff_op_experiment_row(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                                 int degree, int grid_points = 64, std::uint64_t seed = 11,
                                 Real radius = 0.8);

/// Largest principal angle (radians) between span{z^g F} and span{z^g Phi},
/// |g| <= degree, inside truncated H_k.
Real invariant_span_compare(const KernelSpec& k, const VectorSeries& F, const VectorSeries& phi,
                            int degree);

}  // namespace cnpf
