#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cnpf/common.hpp"
#include "cnpf/kernel.hpp"
#include "cnpf/series.hpp"

namespace cnpf {

/// Outcome of a finite-section positive-semidefiniteness test.  `pass` means
/// min_eig >= -tol * max(1, trace): the section did not refute positivity at
/// the sampled points (a necessary, not sufficient, condition).
struct PsdReport {
    int n = 0;
    Real min_eig = 0;
    Real max_eig = 0;
    Real trace = 0;
    Real herm_defect = 0;  ///< max |A - A^H| entry before symmetrizing
    Real tol = 0;
    bool pass = false;
};

/// Eigen-decomposition PSD test.  Verifies approximate Hermitian symmetry
/// (throws NotHermitian beyond 1e-8 relative), symmetrizes, and reports the
/// extreme eigenvalues.
PsdReport psd_check(const Eigen::MatrixXcd& A, Real tol = 1e-10);

/// Gram matrix G(i, j) = k(z_i, z_j) of the kernel at the given points.
Eigen::MatrixXcd gram_matrix(const KernelSpec& spec, const std::vector<std::vector<Complex>>& pts);

/// Finite-section check that g = k/s is a positive kernel, via the Gram of
/// pointwise quotients.  For radial pairs the profile quotient's first
/// profile_order Taylor coefficients are also inspected: all nonnegative is
/// an order-limited certificate on its own.
struct QuotientReport {
    PsdReport section;
    bool profile_checked = false;
    bool profile_nonneg = false;
    int first_negative = -1;
    bool pass = false;  ///< section pass (profile result is informative)
};
QuotientReport quotient_kernel_psd(const KernelSpec& k, const KernelSpec& s,
                                   const std::vector<std::vector<Complex>>& pts,
                                   int profile_order = 64, Real tol = 1e-10);

/// Finite-section certificate that the C^r-valued phi multiplies H(s) into
/// H(k) with norm <= bound: checks PSD of
///   bound^2 k(z_i, z_j) - <phi(z_i), phi(z_j)> s(z_i, z_j).
PsdReport multiplier_norm_cert(const KernelSpec& k, const KernelSpec& s, const VectorSeries& phi,
                               Real bound, const std::vector<std::vector<Complex>>& pts,
                               Real tol = 1e-10);

/// Exact coefficient-level verification that the row multipliers u_g of a
/// normalized kernel with nonnegative row function satisfy
///   sum_g M_{u_g} M_{u_g}^* = I - (projection onto constants)
/// on polynomials of degree <= N.  Reduces to the convolution identity
/// between the row coefficients and the diagonal coefficients.
struct ProjectionIdentityReport {
    Real max_rel_dev = 0;
    Real tol = 0;
    bool pass = false;
};
ProjectionIdentityReport projection_identity_check(const KernelSpec& spec, int N,
                                                   Real tol = 1e-12);

/// Reproducing kernel of the subspace of polynomials of degree <= N (in the
/// metric of `spec`) vanishing at the given points: an orthonormal basis of
/// the constraint null space, exposed as an evaluable kernel
///   k_M(z, w) = sum_i e_i(z) conj(e_i(w)).
class SubspaceKernel {
public:
    SubspaceKernel(const KernelSpec& spec, int N,
                   const std::vector<std::vector<Complex>>& zero_points);

    int subspace_dim() const { return static_cast<int>(basis_.cols()); }
    int order() const { return N_; }

    Complex eval(const std::vector<Complex>& z, const std::vector<Complex>& w) const;

    /// i-th orthonormal basis element as a Series.
    Series basis_element(int i) const;

private:
    Eigen::VectorXcd feature(const std::vector<Complex>& z) const;

    KernelSpec spec_;
    int N_;
    std::vector<Real> sqrt_c_;
    Eigen::MatrixXcd basis_;  ///< columns: null-space basis in isometric coords
};

}  // namespace cnpf
