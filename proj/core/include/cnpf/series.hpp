#pragma once

#include <vector>

#include "cnpf/common.hpp"
#include "cnpf/multiindex.hpp"

namespace cnpf {

/// Truncated power series in d <= 3 complex variables, stored densely over
/// the graded-lex index set of total degree <= order().  All arithmetic is
/// exact on the stored range; products truncate to the requested order, so
/// a Series is always the exact Taylor polynomial of the intended function
/// through its order.
class Series {
public:
    Series() : dim_(1), order_(0), coef_(1, Complex(0)) {}
    Series(int dim, int order);

    static Series constant(int dim, Complex value, int order = 0);
    /// c * z^g, with order defaulting to |g|.
    static Series monomial(int dim, const MultiIndex& g, Complex c, int order = -1);

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::size_t size() const { return coef_.size(); }
    MultiIndexSet index_set() const { return MultiIndexSet(dim_, order_); }

    const std::vector<Complex>& coefficients() const { return coef_; }
    std::vector<Complex>& coefficients() { return coef_; }
    Complex operator[](std::size_t rank) const { return coef_[rank]; }
    Complex& operator[](std::size_t rank) { return coef_[rank]; }

    /// Coefficient by exponent tuple; reads outside the order return zero.
    Complex at(const MultiIndex& g) const;
    void set(const MultiIndex& g, Complex value);

    /// Copy with the order clamped/extended; new coefficients are zero.
    Series truncated(int new_order) const;

    Complex eval(const std::vector<Complex>& z) const;
    Complex eval1(Complex z) const;  ///< univariate Horner

    Series& operator+=(const Series& rhs);
    Series& operator-=(const Series& rhs);
    Series& operator*=(Complex scale);
    friend Series operator+(Series lhs, const Series& rhs) { return lhs += rhs; }
    friend Series operator-(Series lhs, const Series& rhs) { return lhs -= rhs; }
    friend Series operator*(Series lhs, Complex scale) { return lhs *= scale; }
    friend Series operator*(Complex scale, Series rhs) { return rhs *= scale; }

    /// Product truncated to out_order (default: min of the operand orders).
    static Series mul(const Series& a, const Series& b, int out_order = -1);

    /// Multiplicative inverse through out_order; requires f(0) != 0.
    Series reciprocal(int out_order = -1) const;

    /// Partial derivative in the given coordinate (0-based).
    Series derivative(int coordinate = 0) const;

    /// Polynomial composition g(f) by Horner, truncated to out_order
    /// (default: f's order).  Exact when g is a genuine polynomial.
    static Series compose_polynomial(const Series& g, const Series& f, int out_order = -1);

    Real max_abs() const;

    /// True when some operation discarded coefficients beyond the stored
    /// order (products past truncation, reciprocals); propagates through
    /// arithmetic so results advertise their accuracy honestly.
    bool truncation_flag() const { return flag_; }
    void set_truncation_flag(bool f) { flag_ = f; }

private:
    int dim_;
    int order_;
    bool flag_ = false;
    std::vector<Complex> coef_;
};

/// Tuple of Series sharing dimension and order: a C^r-valued function.
class VectorSeries {
public:
    VectorSeries() = default;
    explicit VectorSeries(std::vector<Series> components);
    VectorSeries(int rows, int dim, int order);

    int rows() const { return static_cast<int>(comps_.size()); }
    int dim() const { return comps_.empty() ? 1 : comps_[0].dim(); }
    int order() const { return comps_.empty() ? 0 : comps_[0].order(); }

    const Series& comp(int i) const { return comps_[static_cast<std::size_t>(i)]; }
    Series& comp(int i) { return comps_[static_cast<std::size_t>(i)]; }

    std::vector<Complex> eval(const std::vector<Complex>& z) const;
    /// Squared euclidean length of the value at z.
    Real value_norm_sq(const std::vector<Complex>& z) const;

    VectorSeries truncated(int new_order) const;

private:
    std::vector<Series> comps_;
};

/// <f, g> = sum of f_g * conj(g_g) * monomial_norm_sq[rank], the inner
/// product of an orthogonal-monomial space with the given squared monomial
/// norms (indexed like the series' graded-lex set; missing entries count
/// as zero).  Pairwise summation keeps the result order-independent.
Complex weighted_inner(const Series& f, const Series& g, const std::vector<Real>& monomial_norm_sq);
Complex weighted_inner(const VectorSeries& f, const VectorSeries& g,
                       const std::vector<Real>& monomial_norm_sq);
Real weighted_norm_sq(const Series& f, const std::vector<Real>& monomial_norm_sq);
Real weighted_norm_sq(const VectorSeries& f, const std::vector<Real>& monomial_norm_sq);

}  // namespace cnpf
