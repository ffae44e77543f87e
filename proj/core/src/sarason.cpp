#include "cnpf/sarason.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cnpf/fft.hpp"

namespace cnpf {

namespace {

constexpr std::uint64_t kResidualGridSeed = 0x5eedf00dULL;
constexpr std::uint64_t kMarginSeed = 0xc0417aULL;

void require_same_domain(const KernelSpec& k, const KernelSpec& s) {
    validate(k);
    validate(s);
    if (k.dim != s.dim) throw DimensionMismatch("space and factor kernels must share dimension");
}

int default_tail(const KernelSpec& k, int f_order) {
    return f_order + (k.dim == 1 ? 256 : 64);
}

/// T_g = sum_i sum_d conj(F^i_d) F^i_{d+g} nsq[d+g] for |g| <= out_order.
std::vector<Complex> overlap_sums(const VectorSeries& F, const std::vector<Real>& nsq,
                                  int out_order) {
    const int d = F.dim();
    const int cap = std::min(out_order, F.order());
    const MultiIndexSet oset(d, cap);
    std::vector<Complex> T(oset.size(), Complex(0));
    if (d == 1) {
        for (int i = 0; i < F.rows(); ++i) {
            const std::vector<Complex>& a = F.comp(i).coefficients();
            std::vector<Complex> b(a.size());
            for (std::size_t j = 0; j < a.size(); ++j)
                b[j] = a[j] * (j < nsq.size() ? nsq[j] : Real(0));
            const std::vector<Complex> corr = fft::correlate(a, b);
            for (std::size_t m = 0; m < T.size() && m < corr.size(); ++m) T[m] += corr[m];
        }
        return T;
    }
    const MultiIndexSet fset = F.comp(0).index_set();
    for (int i = 0; i < F.rows(); ++i) {
        const Series& f = F.comp(i);
        for (std::size_t gi = 0; gi < T.size(); ++gi) {
            const MultiIndex g = oset.tuple_of(gi);
            const int rem = F.order() - g.total();
            if (rem < 0) break;
            Complex acc(0);
            const MultiIndexSet dset(d, rem);
            for (std::size_t di = 0; di < dset.size(); ++di) {
                const MultiIndex del = dset.tuple_of(di);
                const Complex fd = f[fset.index_of(del)];
                if (fd == Complex(0)) continue;
                MultiIndex sum;
                sum.e = {del.e[0] + g.e[0], del.e[1] + g.e[1], del.e[2] + g.e[2]};
                const std::size_t si = fset.index_of(sum);
                acc += std::conj(fd) * f[si] * nsq[si];
            }
            T[gi] += acc;
        }
    }
    return T;
}

VectorSeries apply_section(const KernelSpec& s, const std::vector<Complex>& z,
                           const VectorSeries& F, int order) {
    const Series sz = kernel_section(s, z, order);
    std::vector<Series> out;
    out.reserve(static_cast<std::size_t>(F.rows()));
    for (int i = 0; i < F.rows(); ++i) out.push_back(Series::mul(sz, F.comp(i), order));
    return VectorSeries(std::move(out));
}

/// Random polynomial of degree <= deg, coefficients i.i.d. standard complex
/// normal, normalized to unit s-norm.
Series random_unit_poly(Xoshiro256& rng, int dim, int deg, const std::vector<Real>& nsq_s) {
    Series h(dim, deg);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = rng.next_complex_normal();
    const Real n2 = weighted_norm_sq(h, nsq_s);
    if (!(n2 > 0)) throw DivisionByZero("degenerate random polynomial");
    h *= Complex(1 / std::sqrt(n2));
    return h;
}

}  // namespace

SarasonData sarason_function(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                             int N) {
    require_same_domain(k, s);
    if (F.dim() != k.dim) throw DimensionMismatch("F dimension does not match the kernels");
    if (N < 0) N = F.order();
    const std::vector<Real> nsq_k = monomial_norms_sq(k, F.order());
    const std::vector<Real> cs = diagonal_coeffs(s, N);
    const std::vector<Complex> T = overlap_sums(F, nsq_k, N);
    SarasonData out;
    out.k = k;
    out.s = s;
    out.norm_sq = T[0].real();
    out.v = Series(k.dim, N);
    for (std::size_t g = 0; g < T.size(); ++g) out.v[g] = Real(2) * cs[g] * T[g];
    out.v[0] = Complex(out.norm_sq);
    return out;
}

Complex sarason_oracle_value(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                             const std::vector<Complex>& z) {
    require_same_domain(k, s);
    const int ord = F.order();
    const std::vector<Real> nsq_k = monomial_norms_sq(k, ord);
    // Only coefficients through deg F enter <F, s_z F>, so the truncation
    // at ord is exact.
    const VectorSeries szF = apply_section(s, z, F, ord);
    const Complex ip = weighted_inner(F, szF, nsq_k);
    const Real n2 = weighted_norm_sq(F, nsq_k);
    return Real(2) * ip - n2;
}

Factorization factorize(const VectorSeries& F, Complex a, const KernelSpec& k,
                        const KernelSpec& s, int out_order,
                        const std::optional<std::vector<Complex>>& embed_w) {
    require_same_domain(k, s);
    if (!(a.real() > 0)) throw TargetOutOfRange("factorization needs Re a > 0");
    if (out_order < 0) out_order = std::max(4 * std::max(F.order(), 1), 64);

    Factorization fact;
    fact.a = a;
    fact.base_rows = F.rows();

    SarasonData sar = sarason_function(k, s, F, F.order());
    Series v = sar.v.truncated(out_order);
    std::vector<Series> rows;
    rows.reserve(static_cast<std::size_t>(F.rows()) + 1);
    for (int i = 0; i < F.rows(); ++i) rows.push_back(F.comp(i).truncated(out_order));

    if (embed_w) {
        const Real n2 = sar.norm_sq;
        if (n2 > 1 + 1e-12) throw NotUnitNorm("embedding needs |F| <= 1");
        const Real c2 = std::max(Real(0), 1 - n2);
        // V <- V + (1 - |F|^2)(2 s_w - 1), exact in coefficients.
        Series sw = kernel_section(s, *embed_w, out_order);
        sw *= Complex(2 * c2);
        sw.coefficients()[0] -= c2;
        v += sw;
        // Extra slot: sqrt(1-|F|^2) k_w / sqrt(k(w,w)); its Sarason term is
        // what was just added to V.
        const Real kww = kernel_eval(k, *embed_w, *embed_w).real();
        Series aux = kernel_section(k, *embed_w, out_order);
        aux *= Complex(std::sqrt(c2) / std::sqrt(kww));
        rows.push_back(std::move(aux));
        fact.embedded = true;
        fact.embed_w = *embed_w;
        sar.v = v;
        sar.norm_sq = n2 + c2;  // exact norm of the embedded function
    } else {
        sar.v = v;
    }
    fact.sarason = sar;

    Series denom = v;
    denom.coefficients()[0] += std::conj(a);
    const Series rec = denom.reciprocal(out_order);
    Series num = v;
    num.coefficients()[0] -= a;
    fact.psi = Series::mul(num, rec, out_order);
    std::vector<Series> phirows;
    phirows.reserve(rows.size());
    for (const Series& r : rows) phirows.push_back(Series::mul(r, rec, out_order) * Complex(2));
    fact.phi = VectorSeries(std::move(phirows));
    fact.psi_at_base = fact.psi[0];

    // Reconstruction residual on a fixed interior grid.
    const auto grid = sample_domain_points(k, 100, kResidualGridSeed, 0.5);
    Real res = 0;
    for (const auto& z : grid) {
        const Complex psz = fact.psi.eval(z);
        Real acc = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Complex want = rows[i].eval(z);
            const Complex got =
                a.real() * fact.phi.comp(static_cast<int>(i)).eval(z) / (Complex(1) - psz);
            acc += std::norm(want - got);
        }
        res = std::max(res, std::sqrt(acc));
    }
    fact.reconstruction_residual = res;
    fact.contractivity_margin =
        contractivity_check(fact, s, k, 20, kMarginSeed).min_slack;
    return fact;
}

Factorization factorize_unit(const VectorSeries& F, const KernelSpec& k, const KernelSpec& s,
                             int out_order,
                             const std::optional<std::vector<Complex>>& embed_w) {
    if (!embed_w) {
        const std::vector<Real> nsq_k = monomial_norms_sq(k, F.order());
        const Real n2 = weighted_norm_sq(F, nsq_k);
        if (std::abs(n2 - 1) > 1e-10)
            throw NotUnitNorm("factorize_unit needs |F| = 1; use the embedding for |F| < 1");
    }
    return factorize(F, Complex(1, 0), k, s, out_order, embed_w);
}

ContractivityReport contractivity_check(const Factorization& fact, const KernelSpec& s,
                                        const KernelSpec& k, int trials, std::uint64_t seed,
                                        int h_degree, Real tol) {
    const int P = fact.psi.order();
    h_degree = std::min(h_degree, P / 2);
    const std::vector<Real> nsq_s = monomial_norms_sq(s, P);
    const std::vector<Real> nsq_k = monomial_norms_sq(k, P);
    ContractivityReport rep;
    rep.trials = trials;
    rep.h_degree = h_degree;
    rep.min_slack = std::numeric_limits<Real>::infinity();
    Xoshiro256 root(seed);
    for (int t = 0; t < trials; ++t) {
        Xoshiro256 rng = root.split(static_cast<std::uint64_t>(t));
        const Series h = random_unit_poly(rng, fact.psi.dim(), h_degree, nsq_s);
        Real lhs = weighted_norm_sq(Series::mul(fact.psi, h, P), nsq_s);
        for (int i = 0; i < fact.phi.rows(); ++i)
            lhs += fact.a.real() * weighted_norm_sq(Series::mul(fact.phi.comp(i), h, P), nsq_k);
        const Real slack = 1 - lhs;  // h has unit s-norm
        if (slack < rep.min_slack) {
            rep.min_slack = slack;
            rep.worst_trial = t;
        }
    }
    if (trials == 0) rep.min_slack = 0;
    rep.pass = rep.min_slack >= -tol;
    return rep;
}

RApproxReport r_approximant(const Factorization& fact, Real r, const KernelSpec& s,
                            const KernelSpec& k, int trials, std::uint64_t seed,
                            const VectorSeries* F, Real tol) {
    if (!(r > 0 && r < 1)) throw TargetOutOfRange("r must lie in (0, 1)");
    const int P = fact.psi.order();
    Series one_minus = fact.psi * Complex(-r);
    one_minus.coefficients()[0] += Complex(1);
    const Series rec = one_minus.reciprocal(P);
    std::vector<Series> rows;
    for (int i = 0; i < fact.phi.rows(); ++i)
        rows.push_back(Series::mul(fact.phi.comp(i), rec, P));
    RApproxReport rep;
    rep.f_r = VectorSeries(std::move(rows));

    Series herg = fact.psi * Complex(r);
    herg.coefficients()[0] += Complex(1);
    herg = Series::mul(herg, rec, P);  // (1 + r psi)/(1 - r psi)

    const std::vector<Real> nsq_s = monomial_norms_sq(s, P);
    const std::vector<Real> nsq_k = monomial_norms_sq(k, P);
    const int hdeg = std::min(20, P / 2);
    rep.min_slack = std::numeric_limits<Real>::infinity();
    Xoshiro256 root(seed);
    for (int t = 0; t < trials; ++t) {
        Xoshiro256 rng = root.split(static_cast<std::uint64_t>(t));
        const Series h = random_unit_poly(rng, fact.psi.dim(), hdeg, nsq_s);
        Real lhs = 0;
        for (int i = 0; i < rep.f_r.rows(); ++i)
            lhs += weighted_norm_sq(Series::mul(rep.f_r.comp(i), h, P), nsq_k);
        // <gh, h>_s only needs gh through deg h: exact.
        const Real rhs = weighted_inner(Series::mul(herg, h, hdeg), h, nsq_s).real();
        rep.min_slack = std::min(rep.min_slack, rhs - lhs);
    }
    if (trials == 0) rep.min_slack = 0;
    if (F) {
        VectorSeries diff = rep.f_r;
        for (int i = 0; i < F->rows() && i < diff.rows(); ++i) diff.comp(i) -= F->comp(i);
        rep.distance_to_f = std::sqrt(weighted_norm_sq(diff, nsq_k));
    }
    rep.pass = rep.min_slack >= -tol;
    return rep;
}

PsdReport main_lemma_psd(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                         const std::vector<std::vector<Complex>>& pts, Real tol,
                         int tail_order) {
    require_same_domain(k, s);
    if (tail_order < 0) tail_order = default_tail(k, F.order());
    const int n = static_cast<int>(pts.size());
    const std::vector<Real> nsq_k = monomial_norms_sq(k, tail_order);
    std::vector<VectorSeries> SF;
    SF.reserve(static_cast<std::size_t>(n));
    for (const auto& z : pts) SF.push_back(apply_section(s, z, F, tail_order));
    const Real n2 = weighted_norm_sq(F, nsq_k);
    std::vector<Complex> ip0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ip0[static_cast<std::size_t>(i)] = weighted_inner(SF[static_cast<std::size_t>(i)], F, nsq_k);
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Complex cross = weighted_inner(SF[static_cast<std::size_t>(i)],
                                                 SF[static_cast<std::size_t>(j)], nsq_k);
            const Complex sji = kernel_eval(s, pts[static_cast<std::size_t>(j)],
                                            pts[static_cast<std::size_t>(i)]);
            A(i, j) = ip0[static_cast<std::size_t>(i)] +
                      std::conj(ip0[static_cast<std::size_t>(j)]) - n2 - cross / sji;
        }
    return psd_check(A, tol);
}

std::vector<MajorantRow> majorant_check(const KernelSpec& k, const KernelSpec& s,
                                        const VectorSeries& F,
                                        const std::vector<std::vector<Complex>>& grid,
                                        Real tol, int tail_order) {
    require_same_domain(k, s);
    if (tail_order < 0) tail_order = default_tail(k, F.order());
    const SarasonData sar = sarason_function(k, s, F);
    const bool same = k.family == s.family && k.dim == s.dim && k.beta == s.beta &&
                      k.alpha == s.alpha && k.power == s.power && k.custom == s.custom &&
                      !k.base && !s.base;
    int mid_order = tail_order;
    if (same) {
        // The dropped tail of |s_z F|^2 is positive and of size rho^{2(N - deg F)}
        // (up to slow profile factors), so a fixed N underestimates the middle
        // term near the boundary and can break the lhs <= middle leg.  Pick N
        // from the largest grid modulus so the tail sits far below tol.
        Real rho_max = 0;
        for (const auto& z : grid) rho_max = std::max(rho_max, domain_modulus(k, z));
        if (rho_max > 0.1) {
            const Real target = std::log(std::max(tol, Real(1e-12)) * 1e-6);
            const int need = F.order() +
                             static_cast<int>(std::ceil(target / (2.0 * std::log(rho_max)))) + 8;
            mid_order = std::max(mid_order, need);
        }
        // keep the graded index set affordable in higher dimension
        while (mid_order > tail_order &&
               MultiIndexSet::count(k.dim, mid_order) > std::size_t(4'000'000))
            mid_order = tail_order + (mid_order - tail_order) / 2;
    }
    const std::vector<Real> nsq_k =
        same ? monomial_norms_sq(k, mid_order) : std::vector<Real>();
    std::vector<MajorantRow> rows;
    rows.reserve(grid.size());
    for (const auto& z : grid) {
        MajorantRow row;
        row.z = z;
        const Real szz = kernel_eval(s, z, z).real();
        const Real kzz = kernel_eval(k, z, z).real();
        row.lhs = szz / kzz * F.value_norm_sq(z);
        row.rhs = sar.v.eval(z).real();
        row.middle = std::numeric_limits<Real>::quiet_NaN();
        row.pass = row.lhs <= row.rhs + tol * std::max(Real(1), std::abs(row.rhs));
        if (same) {
            const VectorSeries szF = apply_section(s, z, F, mid_order);
            row.middle = weighted_norm_sq(szF, nsq_k) / szz;
            row.pass = row.pass &&
                       row.lhs <= row.middle + tol * std::max(Real(1), row.middle) &&
                       row.middle <= row.rhs + tol * std::max(Real(1), std::abs(row.rhs));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ExtremalReport extremal_check(const KernelSpec& k, const VectorSeries& F, int max_degree,
                              Real tol) {
    validate(k);
    const std::vector<Real> nsq_k = monomial_norms_sq(k, F.order());
    const std::vector<Complex> T = overlap_sums(F, nsq_k, max_degree);
    ExtremalReport rep;
    rep.max_deviation = std::abs(T[0] - Complex(1));
    for (std::size_t g = 1; g < T.size(); ++g)
        rep.max_deviation = std::max(rep.max_deviation, std::abs(T[g]));
    rep.extremal = rep.max_deviation <= tol;
    return rep;
}

std::vector<ExtremalBoundRow> extremal_bound_check(const KernelSpec& k, const KernelSpec& s,
                                                   const VectorSeries& F,
                                                   const std::vector<std::vector<Complex>>& grid,
                                                   Real tol) {
    require_same_domain(k, s);
    std::vector<ExtremalBoundRow> rows;
    rows.reserve(grid.size());
    for (const auto& z : grid) {
        ExtremalBoundRow row;
        row.z = z;
        row.value_sq = F.value_norm_sq(z);
        const Real kzz = kernel_eval(k, z, z).real();
        const Real szz = kernel_eval(s, z, z).real();
        const Real dm = domain_modulus(k, z);
        row.bound_quotient = kzz / szz;
        row.bound_ball = (1 - dm * dm) * kzz;
        row.ball_applicable = (1 - dm * dm) * szz >= 1 - 1e-12;
        row.pass = row.value_sq <= row.bound_quotient + tol * (1 + row.bound_quotient);
        if (row.ball_applicable)
            row.pass = row.pass && row.value_sq <= row.bound_ball + tol * (1 + row.bound_ball);
        rows.push_back(std::move(row));
    }
    return rows;
}

UniquenessReport uniqueness_kernel_psd(const KernelSpec& k, const KernelSpec& s,
                                       const VectorSeries& F, const Series& psi,
                                       const std::vector<std::vector<Complex>>& pts,
                                       Real tol, int tail_order) {
    require_same_domain(k, s);
    if (tail_order < 0) tail_order = default_tail(k, F.order());
    const int n = static_cast<int>(pts.size());
    const std::vector<Real> nsq_k = monomial_norms_sq(k, tail_order);
    std::vector<VectorSeries> SF;
    SF.reserve(static_cast<std::size_t>(n));
    for (const auto& z : pts) SF.push_back(apply_section(s, z, F, tail_order));
    std::vector<Complex> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Complex p = psi.eval(pts[static_cast<std::size_t>(i)]);
        if (std::abs(Complex(1) - p) < 1e-14)
            throw DivisionByZero("psi reaches 1 at a sample point");
        g[static_cast<std::size_t>(i)] = (Complex(1) + p) / (Complex(1) - p);
    }
    Eigen::MatrixXcd L(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Complex sji = kernel_eval(s, pts[static_cast<std::size_t>(j)],
                                            pts[static_cast<std::size_t>(i)]);
            const Complex cross = weighted_inner(SF[static_cast<std::size_t>(i)],
                                                 SF[static_cast<std::size_t>(j)], nsq_k);
            L(i, j) = sji * (g[static_cast<std::size_t>(j)] +
                             std::conj(g[static_cast<std::size_t>(i)])) -
                      Real(2) * cross;
        }
    UniquenessReport rep;
    rep.psd = psd_check(L, tol);
    // Column at the base point z_0 = 0 (where s_0 = 1): L(z, 0) must vanish
    // when psi(0) = 0 and g recovers V_F.
    const Complex psi0 = psi[0];
    const Complex g0 = (Complex(1) + psi0) / (Complex(1) - psi0);
    const SarasonData sar = sarason_function(k, s, F);
    Real maxl = 0, maxrec = 0;
    for (int i = 0; i < n; ++i) {
        const Complex ip = weighted_inner(SF[static_cast<std::size_t>(i)], F, nsq_k);
        const Complex li0 = g0 + std::conj(g[static_cast<std::size_t>(i)]) - Real(2) * ip;
        maxl = std::max(maxl, std::abs(li0));
        maxrec = std::max(maxrec, std::abs(g[static_cast<std::size_t>(i)] -
                                           sar.v.eval(pts[static_cast<std::size_t>(i)])));
    }
    rep.max_l_z0 = maxl;
    rep.max_recovery_dev = maxrec;
    const bool base_ok = std::abs(psi0) > 1e-10 || (maxl <= 1e-6 && maxrec <= 1e-6);
    rep.pass = rep.psd.pass && base_ok;
    return rep;
}

Real multiplier_norm_lower_bound(const VectorSeries& F, const KernelSpec& s, const KernelSpec& k,
                                 int degree) {
    require_same_domain(k, s);
    const int d = F.dim();
    const int prod_order = degree + F.order();
    const MultiIndexSet cols(d, degree);
    const MultiIndexSet rows(d, prod_order);
    const std::vector<Real> cs = diagonal_coeffs(s, degree);
    const std::vector<Real> nsq_k = monomial_norms_sq(k, prod_order);
    const MultiIndexSet fset = F.comp(0).index_set();
    const Eigen::Index R = static_cast<Eigen::Index>(rows.size()) * F.rows();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(R, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
        const MultiIndex g = cols.tuple_of(ci);
        const Real sc = std::sqrt(cs[ci]);
        for (int comp = 0; comp < F.rows(); ++comp) {
            const Series& f = F.comp(comp);
            for (std::size_t fi = 0; fi < f.size(); ++fi) {
                if (f[fi] == Complex(0)) continue;
                const MultiIndex fg = fset.tuple_of(fi);
                MultiIndex sum;
                sum.e = {fg.e[0] + g.e[0], fg.e[1] + g.e[1], fg.e[2] + g.e[2]};
                const std::size_t ri = rows.index_of(sum);
                // isometric coordinates: entry F_{d-g} sqrt(c^s_g / c^k_d)
                M(static_cast<Eigen::Index>(comp * rows.size() + ri),
                  static_cast<Eigen::Index>(ci)) += f[fi] * sc * std::sqrt(nsq_k[ri]);
            }
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0;
}

DiffOpRow diff_op_experiment_row(const KernelSpec& k, const KernelSpec& s, const VectorSeries& F,
                                 int degree, int grid_points, std::uint64_t seed, Real radius) {
    const SarasonData sar = sarason_function(k, s, F);
    DiffOpRow row;
    for (const auto& z : sample_domain_points(k, grid_points, seed, radius))
        row.sup_re_v = std::max(row.sup_re_v, sar.v.eval(z).real());
    row.mult_lower_bound = multiplier_norm_lower_bound(F, s, k, degree);
    return row;
}

Real invariant_span_compare(const KernelSpec& k, const VectorSeries& F, const VectorSeries& phi,
                            int degree) {
    validate(k);
    if (F.dim() != phi.dim() || F.rows() != phi.rows())
        throw DimensionMismatch("span comparison needs matching shapes");
    const int d = F.dim();
    const int A = degree + std::max(F.order(), phi.order());
    const MultiIndexSet shifts(d, degree);
    const MultiIndexSet amb(d, A);
    const std::vector<Real> nsq_k = monomial_norms_sq(k, A);
    const Eigen::Index R = static_cast<Eigen::Index>(amb.size()) * F.rows();

    auto block = [&](const VectorSeries& G) {
        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(R, static_cast<Eigen::Index>(shifts.size()));
        const MultiIndexSet gset = G.comp(0).index_set();
        for (std::size_t si = 0; si < shifts.size(); ++si) {
            const MultiIndex g = shifts.tuple_of(si);
            for (int comp = 0; comp < G.rows(); ++comp) {
                const Series& f = G.comp(comp);
                for (std::size_t fi = 0; fi < f.size(); ++fi) {
                    if (f[fi] == Complex(0)) continue;
                    const MultiIndex fg = gset.tuple_of(fi);
                    MultiIndex sum;
                    sum.e = {fg.e[0] + g.e[0], fg.e[1] + g.e[1], fg.e[2] + g.e[2]};
                    if (sum.total() > A) continue;
                    const std::size_t ri = amb.index_of(sum);
                    B(static_cast<Eigen::Index>(comp * amb.size() + ri),
                      static_cast<Eigen::Index>(si)) += f[fi] * std::sqrt(nsq_k[ri]);
                }
            }
        }
        // Orthonormalize columns (SVD basis of the column space).
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        const Real cut = (sv.size() ? sv(0) : Real(0)) * 1e-12;
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cut) ++rank;
        return Eigen::MatrixXcd(svd.matrixU().leftCols(rank));
    };

    const Eigen::MatrixXcd Q1 = block(F);
    const Eigen::MatrixXcd Q2 = block(phi);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Q1.adjoint() * Q2);
    const auto& sv = svd.singularValues();
    const Eigen::Index m = std::min(Q1.cols(), Q2.cols());
    Real smin = 1;
    for (Eigen::Index i = 0; i < sv.size() && i < m; ++i) smin = std::min(smin, sv(i));
    smin = std::clamp(smin, Real(0), Real(1));
    return std::acos(smin);
}

}  // namespace cnpf
