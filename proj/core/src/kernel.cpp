#include "cnpf/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "cnpf/gammafn.hpp"
#include "cnpf/series.hpp"

namespace cnpf {

namespace {

constexpr Real kEvalEps = 1e-15;

void require_dim_one(const KernelSpec& spec, const char* name) {
    if (spec.dim != 1) throw DimensionMismatch(std::string(name) + " is univariate");
}

}  // namespace

KernelSpec KernelSpec::szego() { return KernelSpec{KernelFamily::SzegoDisc, 1}; }

KernelSpec KernelSpec::drury_arveson(int dim) {
    KernelSpec s;
    s.family = KernelFamily::DruryArveson;
    s.dim = dim;
    return s;
}

KernelSpec KernelSpec::bergman(Real beta) {
    KernelSpec s;
    s.family = KernelFamily::BergmanDiscWeighted;
    s.beta = beta;
    return s;
}

KernelSpec KernelSpec::hardy_ball(int dim) {
    KernelSpec s;
    s.family = KernelFamily::HardyBall;
    s.dim = dim;
    return s;
}

KernelSpec KernelSpec::hardy_polydisc(int dim) {
    KernelSpec s;
    s.family = KernelFamily::HardyPolydisc;
    s.dim = dim;
    return s;
}

KernelSpec KernelSpec::dirichlet_alpha(Real alpha) {
    KernelSpec s;
    s.family = KernelFamily::DirichletAlpha;
    s.alpha = alpha;
    return s;
}

KernelSpec KernelSpec::custom_diagonal(std::vector<Real> coeffs) {
    KernelSpec s;
    s.family = KernelFamily::CustomDiagonal;
    s.custom = std::move(coeffs);
    return s;
}

KernelSpec KernelSpec::power_of(const KernelSpec& base, Real t) {
    KernelSpec s;
    s.family = KernelFamily::PowerOf;
    s.dim = base.dim;
    s.power = t;
    s.base = std::make_shared<KernelSpec>(base);
    return s;
}

void validate(const KernelSpec& spec) {
    switch (spec.family) {
        case KernelFamily::SzegoDisc:
        case KernelFamily::BergmanDiscWeighted:
        case KernelFamily::DirichletAlpha:
        case KernelFamily::CustomDiagonal:
            require_dim_one(spec, family_name(spec.family).c_str());
            break;
        case KernelFamily::DruryArveson:
        case KernelFamily::HardyBall:
        case KernelFamily::HardyPolydisc:
            if (spec.dim < 1 || spec.dim > 3)
                throw DimensionMismatch("kernel dimension must be 1, 2, or 3");
            break;
        case KernelFamily::PowerOf:
            break;
    }
    if (spec.family == KernelFamily::BergmanDiscWeighted && !(spec.beta > -1))
        throw TargetOutOfRange("Bergman weight must exceed -1");
    if (spec.family == KernelFamily::DirichletAlpha &&
        !(spec.alpha > 0 && spec.alpha < 1))
        throw AlphaOutOfRange("Dirichlet-type parameter must lie in (0, 1)");
    if (spec.family == KernelFamily::CustomDiagonal) {
        if (spec.custom.empty()) throw ConfigParse("custom kernel needs coefficients");
        if (spec.custom[0] != Real(1))
            throw NonNormalized("custom kernel must have constant coefficient 1");
        for (Real c : spec.custom)
            if (!(c > 0)) throw UnsupportedFamily("custom kernel coefficients must be positive");
    }
    if (spec.family == KernelFamily::PowerOf) {
        if (!spec.base) throw ConfigParse("power kernel needs a base");
        validate(*spec.base);
        if (!(spec.power > 0 && spec.power <= 1))
            throw TargetOutOfRange("power exponent must lie in (0, 1]");
        if (!is_radial(*spec.base))
            throw NonRadialUnsupported("power kernel needs a radial base");
        if (spec.dim != spec.base->dim)
            throw DimensionMismatch("power kernel must keep the base dimension");
    }
}

int kernel_dim(const KernelSpec& spec) { return spec.dim; }

DomainKind domain_of(const KernelSpec& spec) {
    switch (spec.family) {
        case KernelFamily::HardyPolydisc: return spec.dim == 1 ? DomainKind::Disc : DomainKind::Polydisc;
        case KernelFamily::DruryArveson:
        case KernelFamily::HardyBall: return spec.dim == 1 ? DomainKind::Disc : DomainKind::Ball;
        case KernelFamily::PowerOf: return domain_of(*spec.base);
        default: return DomainKind::Disc;
    }
}

std::string family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::SzegoDisc: return "szego";
        case KernelFamily::DruryArveson: return "drury_arveson";
        case KernelFamily::BergmanDiscWeighted: return "bergman";
        case KernelFamily::HardyBall: return "hardy_ball";
        case KernelFamily::HardyPolydisc: return "hardy_polydisc";
        case KernelFamily::DirichletAlpha: return "dirichlet_alpha";
        case KernelFamily::CustomDiagonal: return "custom";
        case KernelFamily::PowerOf: return "power";
    }
    return "unknown";
}

bool is_radial(const KernelSpec& spec) {
    switch (spec.family) {
        case KernelFamily::HardyPolydisc: return spec.dim == 1;
        case KernelFamily::PowerOf: return is_radial(*spec.base);
        default: return true;
    }
}

std::vector<Real> radial_profile(const KernelSpec& spec, int N) {
    validate(spec);
    if (!is_radial(spec)) throw NonRadialUnsupported("kernel has no radial profile");
    const std::size_t n = static_cast<std::size_t>(N) + 1;
    std::vector<Real> a(n, Real(1));
    switch (spec.family) {
        case KernelFamily::SzegoDisc:
        case KernelFamily::DruryArveson:
        case KernelFamily::HardyPolydisc:
            break;  // all ones
        case KernelFamily::BergmanDiscWeighted:
            for (std::size_t m = 1; m < n; ++m)
                a[m] = a[m - 1] * (static_cast<Real>(m) + 1 + spec.beta) / static_cast<Real>(m);
            break;
        case KernelFamily::HardyBall:
            for (std::size_t m = 1; m < n; ++m)
                a[m] = a[m - 1] * (static_cast<Real>(m) + spec.dim - 1) / static_cast<Real>(m);
            break;
        case KernelFamily::DirichletAlpha: {
            // c_n = 1 / (1 + n * n! * Gamma(a+1) / Gamma(n+1+a))
            const std::vector<Real> ratio = gamma_ratio_table(spec.alpha, N);
            const Real ga1 = gamma_fn(spec.alpha + 1);
            for (std::size_t m = 1; m < n; ++m)
                a[m] = Real(1) / (Real(1) + static_cast<Real>(m) * ga1 * ratio[m]);
            break;
        }
        case KernelFamily::CustomDiagonal:
            if (spec.custom.size() < n)
                throw OrderMismatch("custom kernel coefficient list shorter than requested order");
            std::copy(spec.custom.begin(), spec.custom.begin() + static_cast<std::ptrdiff_t>(n),
                      a.begin());
            break;
        case KernelFamily::PowerOf: {
            // J.C.P. Miller: for f = sum a_j x^j with a_0 = 1 and g = f^t,
            //   m g_m = sum_{j=1..m} ((t+1) j - m) a_j g_{m-j}.
            const std::vector<Real> base = radial_profile(*spec.base, N);
            if (base[0] != Real(1)) throw NonNormalized("power base must be normalized");
            const Real t = spec.power;
            std::vector<Real> g(n, Real(0));
            g[0] = 1;
            for (std::size_t m = 1; m < n; ++m) {
                Real acc = 0;
                for (std::size_t j = 1; j <= m; ++j)
                    acc += ((t + 1) * static_cast<Real>(j) - static_cast<Real>(m)) * base[j] *
                           g[m - j];
                g[m] = acc / static_cast<Real>(m);
            }
            a = std::move(g);
            break;
        }
    }
    return a;
}

std::vector<Real> diagonal_coeffs(const KernelSpec& spec, int N) {
    validate(spec);
    const int d = spec.dim;
    if (d == 1) return radial_profile(spec, N);
    const MultiIndexSet set(d, N);
    std::vector<Real> c(set.size(), Real(1));
    if (spec.family == KernelFamily::HardyPolydisc) return c;  // all ones
    // Radial multivariate: c_g = a_{|g|} * |g|! / g!.
    if (N > 170) throw NumericOverflow("multivariate diagonal order above factorial range");
    const std::vector<Real> a = radial_profile(spec, N);
    std::vector<Real> fact(static_cast<std::size_t>(N) + 1, Real(1));
    for (std::size_t m = 1; m < fact.size(); ++m) fact[m] = fact[m - 1] * static_cast<Real>(m);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const MultiIndex g = set.tuple_of(i);
        const Real multinom =
            fact[static_cast<std::size_t>(g.total())] /
            (fact[static_cast<std::size_t>(g.e[0])] * fact[static_cast<std::size_t>(g.e[1])] *
             fact[static_cast<std::size_t>(g.e[2])]);
        c[i] = a[static_cast<std::size_t>(g.total())] * multinom;
    }
    return c;
}

std::vector<Real> monomial_norms_sq(const KernelSpec& spec, int N) {
    std::vector<Real> c = diagonal_coeffs(spec, N);
    for (Real& v : c) {
        if (!(v > 0))
            throw UnsupportedFamily("kernel has a nonpositive diagonal coefficient");
        v = Real(1) / v;
    }
    return c;
}

Real domain_modulus(const KernelSpec& spec, const std::vector<Complex>& z) {
    if (static_cast<int>(z.size()) != spec.dim)
        throw DimensionMismatch("point dimension does not match kernel");
    switch (domain_of(spec)) {
        case DomainKind::Disc: return std::abs(z[0]);
        case DomainKind::Ball: {
            Real s = 0;
            for (const Complex& v : z) s += std::norm(v);
            return std::sqrt(s);
        }
        case DomainKind::Polydisc: {
            Real m = 0;
            for (const Complex& v : z) m = std::max(m, std::abs(v));
            return m;
        }
    }
    return 0;
}

Complex kernel_eval(const KernelSpec& spec, const std::vector<Complex>& z,
                    const std::vector<Complex>& w) {
    validate(spec);
    if (domain_modulus(spec, z) >= 1 || domain_modulus(spec, w) >= 1)
        throw PointOutsideDomain("kernel evaluation needs points of modulus < 1");
    Complex herm(0);
    for (std::size_t i = 0; i < z.size(); ++i) herm += z[i] * std::conj(w[i]);
    switch (spec.family) {
        case KernelFamily::SzegoDisc:
        case KernelFamily::DruryArveson:
            return Complex(1) / (Complex(1) - herm);
        case KernelFamily::BergmanDiscWeighted:
            return std::exp(-(spec.beta + 2) * std::log(Complex(1) - herm));
        case KernelFamily::HardyBall: {
            Complex p(1);
            for (int i = 0; i < spec.dim; ++i) p *= Complex(1) - herm;
            return Complex(1) / p;
        }
        case KernelFamily::HardyPolydisc: {
            Complex p(1);
            for (std::size_t i = 0; i < z.size(); ++i)
                p *= Complex(1) - z[i] * std::conj(w[i]);
            return Complex(1) / p;
        }
        case KernelFamily::CustomDiagonal: {
            Complex acc(0), xp(1);
            for (Real c : spec.custom) {
                acc += c * xp;
                xp *= herm;
            }
            return acc;
        }
        case KernelFamily::DirichletAlpha: {
            // Adaptive head sum; coefficients decay like m^(a-1) so the
            // geometric factor controls the tail.
            const Real r = std::abs(herm);
            Complex acc(1), xp(1);
            Real t = 1;  // n * n! * G(a+1) / G(n+1+a), updated by ratio
            const Real ga1 = gamma_fn(spec.alpha + 1);
            for (std::size_t m = 1; m <= 400000; ++m) {
                xp *= herm;
                if (m == 1)
                    t = ga1 / gamma_fn(2 + spec.alpha);
                else
                    t *= static_cast<Real>(m) * static_cast<Real>(m) /
                         (static_cast<Real>(m - 1) * (static_cast<Real>(m) + spec.alpha));
                const Real cm = Real(1) / (Real(1) + static_cast<Real>(m) * t);
                acc += cm * xp;
                const Real tail = cm * std::pow(r, static_cast<Real>(m)) * r / (1 - r);
                if (tail < kEvalEps * (1 + std::abs(acc))) return acc;
            }
            throw TailTooLarge("Dirichlet-type kernel evaluation too close to the boundary");
        }
        case KernelFamily::PowerOf: {
            const Real r = std::abs(herm);
            int N = 256;
            for (;;) {
                const std::vector<Real> prof = radial_profile(spec, N);
                Complex acc(0), xp(1);
                for (Real c : prof) {
                    acc += c * xp;
                    xp *= herm;
                }
                Real maxtail = 0;
                for (std::size_t m = prof.size() - 8; m < prof.size(); ++m)
                    maxtail = std::max(maxtail, std::abs(prof[m]));
                const Real tail =
                    maxtail * std::pow(r, static_cast<Real>(N)) * r / (1 - r);
                if (tail < kEvalEps * (1 + std::abs(acc))) return acc;
                if (N >= 16384)
                    throw TailTooLarge("power kernel evaluation too close to the boundary");
                N *= 2;
            }
        }
    }
    throw UnsupportedFamily("unhandled kernel family");
}

CnpRow cnp_row_function(const KernelSpec& spec, int N, Real tol) {
    const std::vector<Real> prof = radial_profile(spec, N);
    if (prof[0] != Real(1)) throw NonNormalized("kernel profile must start at 1");
    Series s(1, N);
    for (std::size_t m = 0; m < prof.size(); ++m) s[m] = Complex(prof[m]);
    const Series r = s.reciprocal(N);
    CnpRow row;
    row.b.assign(static_cast<std::size_t>(N) + 1, Real(0));
    for (std::size_t m = 1; m < row.b.size(); ++m) row.b[m] = -r[m].real();
    for (std::size_t m = 1; m < row.b.size(); ++m) {
        if (row.b[m] < -tol) {
            row.cnp = false;
            row.first_negative = static_cast<int>(m);
            break;
        }
    }
    return row;
}

Series kernel_section(const KernelSpec& spec, const std::vector<Complex>& w, int order) {
    if (static_cast<int>(w.size()) != spec.dim)
        throw DimensionMismatch("section point dimension does not match kernel");
    const std::vector<Real> c = diagonal_coeffs(spec, order);
    Series out(spec.dim, order);
    out.set_truncation_flag(true);
    const MultiIndexSet set(spec.dim, order);
    std::array<std::vector<Complex>, 3> pw;
    for (int v = 0; v < spec.dim; ++v) {
        pw[static_cast<std::size_t>(v)].resize(static_cast<std::size_t>(order) + 1);
        Complex p(1);
        const Complex cw = std::conj(w[static_cast<std::size_t>(v)]);
        for (int e = 0; e <= order; ++e) {
            pw[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)] = p;
            p *= cw;
        }
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        const MultiIndex g = set.tuple_of(i);
        Complex term(c[i]);
        for (int v = 0; v < spec.dim; ++v)
            term *= pw[static_cast<std::size_t>(v)][static_cast<std::size_t>(g.e[v])];
        out[i] = term;
    }
    return out;
}

std::vector<std::vector<Complex>> sample_domain_points(const KernelSpec& spec, int count,
                                                       std::uint64_t seed, Real radius) {
    validate(spec);
    Xoshiro256 rng(seed);
    std::vector<std::vector<Complex>> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        switch (domain_of(spec)) {
            case DomainKind::Disc:
            case DomainKind::Polydisc:
                pts.push_back(random_polydisc_point(rng, spec.dim, radius));
                break;
            case DomainKind::Ball:
                pts.push_back(random_ball_point(rng, spec.dim, radius));
                break;
        }
    }
    return pts;
}

}  // namespace cnpf
