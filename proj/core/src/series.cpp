#include "cnpf/series.hpp"

#include <algorithm>
#include <cmath>

#include "cnpf/fft.hpp"

namespace cnpf {

namespace {

void require_same_dim(const Series& a, const Series& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("series dimensions differ");
}

}  // namespace

Series::Series(int dim, int order) : dim_(dim), order_(order) {
    if (dim < 1 || dim > 3) throw DimensionMismatch("series dimension must be 1, 2, or 3");
    if (order < 0) throw OrderMismatch("series order must be nonnegative");
    coef_.assign(MultiIndexSet::count(dim, order), Complex(0));
}

Series Series::constant(int dim, Complex value, int order) {
    Series s(dim, order);
    s.coef_[0] = value;
    return s;
}

Series Series::monomial(int dim, const MultiIndex& g, Complex c, int order) {
    if (order < 0) order = g.total();
    Series s(dim, order);
    s.set(g, c);
    return s;
}

Complex Series::at(const MultiIndex& g) const {
    if (g.e[0] < 0 || g.e[1] < 0 || g.e[2] < 0) throw DimensionMismatch("negative exponent");
    if (g.total() > order_) return Complex(0);
    return coef_[index_set().index_of(g)];
}

void Series::set(const MultiIndex& g, Complex value) {
    if (g.total() > order_) throw OrderMismatch("exponent exceeds series order");
    coef_[index_set().index_of(g)] = value;
}

Series Series::truncated(int new_order) const {
    Series out(dim_, new_order);
    const std::size_t n = std::min(out.coef_.size(), coef_.size());
    std::copy(coef_.begin(), coef_.begin() + static_cast<std::ptrdiff_t>(n), out.coef_.begin());
    out.flag_ = flag_;
    if (new_order < order_) {
        for (std::size_t i = n; i < coef_.size(); ++i)
            if (coef_[i] != Complex(0)) {
                out.flag_ = true;
                break;
            }
    }
    return out;
}

Complex Series::eval1(Complex z) const {
    if (dim_ != 1) throw NotUnivariate("eval1 requires a univariate series");
    Complex acc(0);
    for (std::size_t i = coef_.size(); i-- > 0;) acc = acc * z + coef_[i];
    return acc;
}

Complex Series::eval(const std::vector<Complex>& z) const {
    if (static_cast<int>(z.size()) != dim_)
        throw DimensionMismatch("evaluation point has wrong dimension");
    if (dim_ == 1) return eval1(z[0]);
    // Power tables per variable, then a pairwise sum over the index set.
    std::array<std::vector<Complex>, 3> pw;
    for (int v = 0; v < dim_; ++v) {
        pw[static_cast<std::size_t>(v)].resize(static_cast<std::size_t>(order_) + 1);
        Complex p(1);
        for (int e = 0; e <= order_; ++e) {
            pw[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)] = p;
            p *= z[static_cast<std::size_t>(v)];
        }
    }
    const MultiIndexSet set = index_set();
    return pairwise_sum_n<Complex>(coef_.size(), [&](std::size_t i) {
        const MultiIndex g = set.tuple_of(i);
        Complex term = coef_[i];
        for (int v = 0; v < dim_; ++v)
            term *= pw[static_cast<std::size_t>(v)][static_cast<std::size_t>(g.e[v])];
        return term;
    });
}

Series& Series::operator+=(const Series& rhs) {
    require_same_dim(*this, rhs);
    // Graded-lex ranks do not depend on the order bound, so a lower-order
    // coefficient vector is a prefix of a higher-order one.
    if (rhs.order_ > order_) *this = truncated(rhs.order_);
    for (std::size_t i = 0; i < rhs.coef_.size(); ++i) coef_[i] += rhs.coef_[i];
    flag_ = flag_ || rhs.flag_;
    return *this;
}

Series& Series::operator-=(const Series& rhs) {
    require_same_dim(*this, rhs);
    if (rhs.order_ > order_) *this = truncated(rhs.order_);
    for (std::size_t i = 0; i < rhs.coef_.size(); ++i) coef_[i] -= rhs.coef_[i];
    flag_ = flag_ || rhs.flag_;
    return *this;
}

Series& Series::operator*=(Complex scale) {
    for (Complex& c : coef_) c *= scale;
    return *this;
}

Series Series::mul(const Series& a, const Series& b, int out_order) {
    require_same_dim(a, b);
    if (out_order < 0) out_order = std::min(a.order_, b.order_);
    Series out(a.dim_, out_order);
    out.flag_ = a.flag_ || b.flag_ || (out_order < a.order_ + b.order_);
    if (a.dim_ == 1) {
        // Trim inputs to what can influence the kept range, then convolve.
        const std::size_t na = std::min(a.coef_.size(), static_cast<std::size_t>(out_order) + 1);
        const std::size_t nb = std::min(b.coef_.size(), static_cast<std::size_t>(out_order) + 1);
        std::vector<Complex> ta(a.coef_.begin(), a.coef_.begin() + static_cast<std::ptrdiff_t>(na));
        std::vector<Complex> tb(b.coef_.begin(), b.coef_.begin() + static_cast<std::ptrdiff_t>(nb));
        std::vector<Complex> c = fft::convolve(ta, tb);
        const std::size_t keep = std::min(c.size(), out.coef_.size());
        std::copy(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(keep), out.coef_.begin());
        return out;
    }
    const MultiIndexSet sa = a.index_set(), sb = b.index_set(), so = out.index_set();
    for (std::size_t i = 0; i < a.coef_.size(); ++i) {
        if (a.coef_[i] == Complex(0)) continue;
        const MultiIndex ga = sa.tuple_of(i);
        const int da = ga.total();
        if (da > out_order) break;  // graded order: all later ranks are higher degree
        const std::size_t jmax = sb.size();
        for (std::size_t j = 0; j < jmax; ++j) {
            const MultiIndex gb = sb.tuple_of(j);
            if (da + gb.total() > out_order) break;
            if (b.coef_[j] == Complex(0)) continue;
            MultiIndex gc;
            gc.e = {ga.e[0] + gb.e[0], ga.e[1] + gb.e[1], ga.e[2] + gb.e[2]};
            out.coef_[so.index_of(gc)] += a.coef_[i] * b.coef_[j];
        }
    }
    return out;
}

Series Series::reciprocal(int out_order) const {
    if (out_order < 0) out_order = order_;
    if (coef_.empty() || coef_[0] == Complex(0))
        throw ZeroConstantTerm("reciprocal requires a nonzero constant term");
    Series out(dim_, out_order);
    out.flag_ = true;  // an inverse is essentially always an infinite series
    const Complex inv0 = Complex(1) / coef_[0];
    if (dim_ == 1) {
        const std::size_t n = static_cast<std::size_t>(out_order) + 1;
        if (n <= 512) {
            // Direct recurrence: r_m = -(1/f_0) sum_{j=1..m} f_j r_{m-j}.
            out.coef_[0] = inv0;
            for (std::size_t m = 1; m < n; ++m) {
                Complex acc(0);
                const std::size_t jmax = std::min(m, coef_.size() - 1);
                for (std::size_t j = 1; j <= jmax; ++j) acc += coef_[j] * out.coef_[m - j];
                out.coef_[m] = -inv0 * acc;
            }
            return out;
        }
        // Newton doubling: r <- r(2 - f r), correct terms double each pass.
        std::vector<Complex> r{inv0};
        std::size_t k = 1;
        while (k < n) {
            const std::size_t k2 = std::min(2 * k, n);
            std::vector<Complex> fh(coef_.begin(),
                                    coef_.begin() + static_cast<std::ptrdiff_t>(
                                                        std::min(k2, coef_.size())));
            std::vector<Complex> fr = fft::convolve(fh, r);
            fr.resize(k2, Complex(0));
            for (Complex& c : fr) c = -c;
            fr[0] += Complex(2);
            std::vector<Complex> rn = fft::convolve(r, fr);
            rn.resize(k2, Complex(0));
            r = std::move(rn);
            k = k2;
        }
        std::copy(r.begin(), r.end(), out.coef_.begin());
        return out;
    }
    // Multivariate: graded recurrence over component-wise sub-indices.
    const Series f = truncated(out_order);
    const MultiIndexSet set = out.index_set();
    out.coef_[0] = inv0;
    for (std::size_t rank = 1; rank < out.coef_.size(); ++rank) {
        const MultiIndex g = set.tuple_of(rank);
        Complex acc(0);
        MultiIndex d;
        for (d.e[0] = 0; d.e[0] <= g.e[0]; ++d.e[0])
            for (d.e[1] = 0; d.e[1] <= g.e[1]; ++d.e[1])
                for (d.e[2] = 0; d.e[2] <= g.e[2]; ++d.e[2]) {
                    if (d.total() == 0) continue;
                    const Complex fd = f.coef_[set.index_of(d)];
                    if (fd == Complex(0)) continue;
                    MultiIndex rest;
                    rest.e = {g.e[0] - d.e[0], g.e[1] - d.e[1], g.e[2] - d.e[2]};
                    acc += fd * out.coef_[set.index_of(rest)];
                }
        out.coef_[rank] = -inv0 * acc;
    }
    return out;
}

Series Series::derivative(int coordinate) const {
    if (coordinate < 0 || coordinate >= dim_)
        throw DimensionMismatch("derivative coordinate out of range");
    Series out(dim_, std::max(order_ - 1, 0));
    out.flag_ = flag_;
    if (dim_ == 1) {
        for (std::size_t m = 1; m < coef_.size(); ++m)
            out.coef_[m - 1] = static_cast<Real>(m) * coef_[m];
        return out;
    }
    const MultiIndexSet set = index_set();
    const MultiIndexSet oset = out.index_set();
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        const MultiIndex g = set.tuple_of(i);
        if (g.e[coordinate] == 0 || coef_[i] == Complex(0)) continue;
        MultiIndex h = g;
        h.e[coordinate] -= 1;
        out.coef_[oset.index_of(h)] = static_cast<Real>(g.e[coordinate]) * coef_[i];
    }
    return out;
}

Series Series::compose_polynomial(const Series& g, const Series& f, int out_order) {
    if (g.dim() != 1) throw NotUnivariate("outer factor of a composition must be univariate");
    if (out_order < 0) out_order = f.order_;
    // Horner: acc = g_n, then acc = acc*f + g_{k} downward.
    Series acc = Series::constant(f.dim_, g.coef_.back(), out_order);
    for (std::size_t k = g.coef_.size() - 1; k-- > 0;) {
        acc = mul(acc, f, out_order);
        acc.coef_[0] += g.coef_[k];
    }
    acc.flag_ = acc.flag_ || g.flag_ || f.flag_;
    return acc;
}

Real Series::max_abs() const {
    Real m = 0;
    for (const Complex& c : coef_) m = std::max(m, std::abs(c));
    return m;
}

VectorSeries::VectorSeries(std::vector<Series> components) : comps_(std::move(components)) {
    for (const Series& s : comps_) {
        if (s.dim() != dim()) throw DimensionMismatch("vector series components mix dimensions");
        if (s.order() != order()) throw OrderMismatch("vector series components mix orders");
    }
}

VectorSeries::VectorSeries(int rows, int dim, int order)
    : comps_(static_cast<std::size_t>(rows), Series(dim, order)) {}

std::vector<Complex> VectorSeries::eval(const std::vector<Complex>& z) const {
    std::vector<Complex> out(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i].eval(z);
    return out;
}

Real VectorSeries::value_norm_sq(const std::vector<Complex>& z) const {
    Real acc = 0;
    for (const Series& s : comps_) acc += std::norm(s.eval(z));
    return acc;
}

VectorSeries VectorSeries::truncated(int new_order) const {
    std::vector<Series> out;
    out.reserve(comps_.size());
    for (const Series& s : comps_) out.push_back(s.truncated(new_order));
    return VectorSeries(std::move(out));
}

Complex weighted_inner(const Series& f, const Series& g,
                       const std::vector<Real>& monomial_norm_sq) {
    if (f.dim() != g.dim()) throw DimensionMismatch("inner product dimensions differ");
    const std::size_t n =
        std::min({f.size(), g.size(), monomial_norm_sq.size()});
    return pairwise_sum_n<Complex>(n, [&](std::size_t i) {
        return f[i] * std::conj(g[i]) * monomial_norm_sq[i];
    });
}

Complex weighted_inner(const VectorSeries& f, const VectorSeries& g,
                       const std::vector<Real>& monomial_norm_sq) {
    if (f.rows() != g.rows()) throw DimensionMismatch("inner product row counts differ");
    Complex acc(0);
    for (int i = 0; i < f.rows(); ++i)
        acc += weighted_inner(f.comp(i), g.comp(i), monomial_norm_sq);
    return acc;
}

Real weighted_norm_sq(const Series& f, const std::vector<Real>& monomial_norm_sq) {
    const std::size_t n = std::min(f.size(), monomial_norm_sq.size());
    return pairwise_sum_n<Real>(
        n, [&](std::size_t i) { return std::norm(f[i]) * monomial_norm_sq[i]; });
}

Real weighted_norm_sq(const VectorSeries& f, const std::vector<Real>& monomial_norm_sq) {
    Real acc = 0;
    for (int i = 0; i < f.rows(); ++i) acc += weighted_norm_sq(f.comp(i), monomial_norm_sq);
    return acc;
}

}  // namespace cnpf
