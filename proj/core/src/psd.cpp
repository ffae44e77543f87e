#include "cnpf/psd.hpp"

#include <algorithm>
#include <cmath>

namespace cnpf {

PsdReport psd_check(const Eigen::MatrixXcd& A, Real tol) {
    if (A.rows() != A.cols()) throw DimensionMismatch("psd_check needs a square matrix");
    PsdReport rep;
    rep.n = static_cast<int>(A.rows());
    rep.tol = tol;
    const Eigen::MatrixXcd diff = A - A.adjoint();
    rep.herm_defect = diff.cwiseAbs().maxCoeff();
    const Real scale = std::max(Real(1), A.cwiseAbs().maxCoeff());
    if (rep.herm_defect > 1e-8 * scale)
        throw NotHermitian("matrix is not Hermitian within tolerance");
    const Eigen::MatrixXcd H = Real(0.5) * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    rep.min_eig = es.eigenvalues().minCoeff();
    rep.max_eig = es.eigenvalues().maxCoeff();
    rep.trace = H.trace().real();
    rep.pass = rep.min_eig >= -tol * std::max(Real(1), rep.trace);
    return rep;
}

Eigen::MatrixXcd gram_matrix(const KernelSpec& spec,
                             const std::vector<std::vector<Complex>>& pts) {
    const int n = static_cast<int>(pts.size());
    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = kernel_eval(spec, pts[static_cast<std::size_t>(i)],
                                  pts[static_cast<std::size_t>(j)]);
    return G;
}

QuotientReport quotient_kernel_psd(const KernelSpec& k, const KernelSpec& s,
                                   const std::vector<std::vector<Complex>>& pts,
                                   int profile_order, Real tol) {
    if (k.dim != s.dim) throw DimensionMismatch("quotient needs kernels on the same domain");
    QuotientReport rep;
    const int n = static_cast<int>(pts.size());
    Eigen::MatrixXcd Q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& zi = pts[static_cast<std::size_t>(i)];
            const auto& zj = pts[static_cast<std::size_t>(j)];
            Q(i, j) = kernel_eval(k, zi, zj) / kernel_eval(s, zi, zj);
        }
    rep.section = psd_check(Q, tol);
    if (is_radial(k) && is_radial(s)) {
        rep.profile_checked = true;
        const std::vector<Real> pk = radial_profile(k, profile_order);
        const std::vector<Real> ps = radial_profile(s, profile_order);
        Series num(1, profile_order), den(1, profile_order);
        for (int m = 0; m <= profile_order; ++m) {
            num[static_cast<std::size_t>(m)] = Complex(pk[static_cast<std::size_t>(m)]);
            den[static_cast<std::size_t>(m)] = Complex(ps[static_cast<std::size_t>(m)]);
        }
        const Series q = Series::mul(num, den.reciprocal(profile_order), profile_order);
        rep.profile_nonneg = true;
        for (int m = 0; m <= profile_order; ++m) {
            if (q[static_cast<std::size_t>(m)].real() < -tol) {
                rep.profile_nonneg = false;
                rep.first_negative = m;
                break;
            }
        }
    }
    rep.pass = rep.section.pass;
    return rep;
}

PsdReport multiplier_norm_cert(const KernelSpec& k, const KernelSpec& s, const VectorSeries& phi,
                               Real bound, const std::vector<std::vector<Complex>>& pts,
                               Real tol) {
    if (k.dim != s.dim || phi.dim() != k.dim)
        throw DimensionMismatch("multiplier certificate needs matching dimensions");
    const int n = static_cast<int>(pts.size());
    std::vector<std::vector<Complex>> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        vals[static_cast<std::size_t>(i)] = phi.eval(pts[static_cast<std::size_t>(i)]);
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& zi = pts[static_cast<std::size_t>(i)];
            const auto& zj = pts[static_cast<std::size_t>(j)];
            Complex dot(0);
            for (int c = 0; c < phi.rows(); ++c)
                dot += vals[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] *
                       std::conj(vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
            M(i, j) = bound * bound * kernel_eval(k, zi, zj) - dot * kernel_eval(s, zi, zj);
        }
    return psd_check(M, tol);
}

ProjectionIdentityReport projection_identity_check(const KernelSpec& spec, int N, Real tol) {
    // sum_{0 < g <= d (componentwise)} B_g c_{d-g} must equal c_d for every
    // d with 1 <= |d| <= N, where B is the diagonal expansion of the row
    // function.  This is the coefficient form of sum M M* = I - P_0.
    const CnpRow row = cnp_row_function(spec, N);
    if (!row.cnp) throw NotCNP("row function has a negative coefficient");
    const std::vector<Real> c = diagonal_coeffs(spec, N);
    const int d = spec.dim;
    const MultiIndexSet set(d, N);
    // Diagonal coefficients of the row kernel: B_g = b_{|g|} |g|!/g!.
    std::vector<Real> fact(static_cast<std::size_t>(N) + 1, Real(1));
    for (std::size_t m = 1; m < fact.size(); ++m) fact[m] = fact[m - 1] * static_cast<Real>(m);
    std::vector<Real> B(set.size(), Real(0));
    for (std::size_t i = 0; i < B.size(); ++i) {
        const MultiIndex g = set.tuple_of(i);
        const Real multinom =
            fact[static_cast<std::size_t>(g.total())] /
            (fact[static_cast<std::size_t>(g.e[0])] * fact[static_cast<std::size_t>(g.e[1])] *
             fact[static_cast<std::size_t>(g.e[2])]);
        B[i] = row.b[static_cast<std::size_t>(g.total())] * multinom;
    }
    ProjectionIdentityReport rep;
    rep.tol = tol;
    for (std::size_t i = 1; i < set.size(); ++i) {
        const MultiIndex gd = set.tuple_of(i);
        Real acc = 0;
        MultiIndex g;
        for (g.e[0] = 0; g.e[0] <= gd.e[0]; ++g.e[0])
            for (g.e[1] = 0; g.e[1] <= gd.e[1]; ++g.e[1])
                for (g.e[2] = 0; g.e[2] <= gd.e[2]; ++g.e[2]) {
                    if (g.total() == 0) continue;
                    MultiIndex rest;
                    rest.e = {gd.e[0] - g.e[0], gd.e[1] - g.e[1], gd.e[2] - g.e[2]};
                    acc += B[set.index_of(g)] * c[set.index_of(rest)];
                }
        const Real dev = std::abs(acc - c[i]) / std::max(Real(1), std::abs(c[i]));
        rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
    }
    rep.pass = rep.max_rel_dev <= tol;
    return rep;
}

SubspaceKernel::SubspaceKernel(const KernelSpec& spec, int N,
                               const std::vector<std::vector<Complex>>& zero_points)
    : spec_(spec), N_(N) {
    validate(spec);
    const std::vector<Real> c = diagonal_coeffs(spec, N);
    sqrt_c_.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] > 0)) throw UnsupportedFamily("subspace kernel needs positive coefficients");
        sqrt_c_[i] = std::sqrt(c[i]);
    }
    const int M = static_cast<int>(c.size());
    const int R = static_cast<int>(zero_points.size());
    // Constraint rows in isometric coordinates a_g = f_g / sqrt(c_g):
    // f(p) = sum_g a_g sqrt(c_g) p^g.
    Eigen::MatrixXcd C(R, M);
    for (int r = 0; r < R; ++r) {
        const Eigen::VectorXcd v = feature(zero_points[static_cast<std::size_t>(r)]);
        C.row(r) = v.transpose();  // f(p) = v(p)^T a
    }
    if (R == 0) {
        basis_ = Eigen::MatrixXcd::Identity(M, M);
        return;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Real cutoff = (sv.size() > 0 ? sv(0) : Real(0)) * 1e-12;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    const int dim = M - rank;
    if (dim <= 0) throw DegenerateConstraint("constraints leave only the zero polynomial");
    basis_ = svd.matrixV().rightCols(dim);
}

Eigen::VectorXcd SubspaceKernel::feature(const std::vector<Complex>& z) const {
    if (static_cast<int>(z.size()) != spec_.dim)
        throw DimensionMismatch("point dimension does not match kernel");
    const MultiIndexSet set(spec_.dim, N_);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(set.size()));
    for (std::size_t i = 0; i < set.size(); ++i) {
        const MultiIndex g = set.tuple_of(i);
        Complex p(1);
        for (int d = 0; d < spec_.dim; ++d)
            for (int e = 0; e < g.e[d]; ++e) p *= z[static_cast<std::size_t>(d)];
        v(static_cast<Eigen::Index>(i)) = sqrt_c_[i] * p;
    }
    return v;
}

Complex SubspaceKernel::eval(const std::vector<Complex>& z,
                             const std::vector<Complex>& w) const {
    // e_i(z) = v(z)^T q_i, so k_M(z, w) = sum_i (v(z)^T q_i) conj(v(w)^T q_i).
    const Eigen::VectorXcd uz = basis_.transpose() * feature(z);
    const Eigen::VectorXcd uw = basis_.transpose() * feature(w);
    Complex acc(0);
    for (Eigen::Index i = 0; i < uz.size(); ++i) acc += uz(i) * std::conj(uw(i));
    return acc;
}

Series SubspaceKernel::basis_element(int i) const {
    if (i < 0 || i >= subspace_dim()) throw DimensionMismatch("basis index out of range");
    Series s(spec_.dim, N_);
    for (std::size_t g = 0; g < sqrt_c_.size(); ++g)
        s[g] = basis_(static_cast<Eigen::Index>(g), i) * sqrt_c_[g];
    return s;
}

}  // namespace cnpf
