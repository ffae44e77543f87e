#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cnpf/common.hpp"
#include "cnpf/multiindex.hpp"
#include "cnpf/rng.hpp"

namespace cnpf {

/// Built-in diagonal reproducing kernels k(z, w) = sum_g c_g z^g conj(w)^g
/// on the disc, the complex ball, or the polydisc.  All are normalized so
/// the constant coefficient is 1 (k(z, 0) = 1).
enum class KernelFamily {
    SzegoDisc,            ///< 1 / (1 - z conj(w))
    DruryArveson,         ///< 1 / (1 - <z, w>) on the d-ball
    BergmanDiscWeighted,  ///< (1 - z conj(w))^-(beta + 2)
    HardyBall,            ///< (1 - <z, w>)^-d on the d-ball
    HardyPolydisc,        ///< prod_i 1 / (1 - z_i conj(w_i))
    DirichletAlpha,       ///< c_n = 1 / (1 + n n! G(a+1) / G(n+a+1)), a in (0,1)
    CustomDiagonal,       ///< user-supplied univariate coefficient list
    PowerOf,              ///< radial base kernel raised to a power t in (0, 1]
};

enum class DomainKind { Disc, Ball, Polydisc };

struct KernelSpec {
    KernelFamily family = KernelFamily::SzegoDisc;
    int dim = 1;
    Real beta = 0;    ///< Bergman weight, > -1
    Real alpha = 0.5; ///< Dirichlet-type parameter, in (0, 1)
    Real power = 1;   ///< exponent for PowerOf, in (0, 1]
    std::vector<Real> custom;          ///< CustomDiagonal coefficients, c_0 = 1
    std::shared_ptr<KernelSpec> base;  ///< PowerOf base kernel

    static KernelSpec szego();
    static KernelSpec drury_arveson(int dim);
    static KernelSpec bergman(Real beta = 0);
    static KernelSpec hardy_ball(int dim);
    static KernelSpec hardy_polydisc(int dim);
    static KernelSpec dirichlet_alpha(Real alpha);
    static KernelSpec custom_diagonal(std::vector<Real> coeffs);
    static KernelSpec power_of(const KernelSpec& base, Real t);
};

/// Throws (UnsupportedFamily / AlphaOutOfRange / ...) unless the spec's
/// parameters are in range and consistent.
void validate(const KernelSpec& spec);

int kernel_dim(const KernelSpec& spec);
DomainKind domain_of(const KernelSpec& spec);
std::string family_name(KernelFamily family);

/// True when k(z, w) is a function of <z, w> alone (every univariate family,
/// DruryArveson, HardyBall, and PowerOf of a radial base).
bool is_radial(const KernelSpec& spec);

/// Radial profile a_m with k(z, w) = sum_m a_m <z, w>^m, m = 0 .. N.
/// Throws NonRadialUnsupported otherwise.
std::vector<Real> radial_profile(const KernelSpec& spec, int N);

/// Diagonal coefficients c_g over the graded-lex set of total degree <= N.
std::vector<Real> diagonal_coeffs(const KernelSpec& spec, int N);

/// Squared monomial norms 1 / c_g in the same layout.
std::vector<Real> monomial_norms_sq(const KernelSpec& spec, int N);

/// Pointwise kernel value from the closed form (series-summed for the
/// Dirichlet-type and PowerOf families; accurate for points of modulus
/// bounded away from 1).  Throws PointOutsideDomain when z or w leaves the
/// open domain.
Complex kernel_eval(const KernelSpec& spec, const std::vector<Complex>& z,
                    const std::vector<Complex>& w);

/// Coefficients b_m of 1 - 1/s_t(x) = sum_{m>=1} b_m x^m for the normalized
/// radial profile s_t; the kernel has the complete-positivity property
/// (through order N) exactly when every b_m is nonnegative.
struct CnpRow {
    std::vector<Real> b;     ///< b_0 = 0, then b_1 .. b_N
    bool cnp = true;         ///< no coefficient below -tol
    int first_negative = -1; ///< smallest offending index, or -1
};
CnpRow cnp_row_function(const KernelSpec& spec, int N, Real tol = 1e-12);

/// Truncated series of z -> k(z, w) for fixed w: coefficients c_g conj(w^g).
/// Forward declared here; definition in series.hpp.
class Series;
Series kernel_section(const KernelSpec& spec, const std::vector<Complex>& w, int order);

/// Deterministic sample of `count` points in the open domain, scaled to the
/// given max modulus / radius.  Pure function of the seed.
std::vector<std::vector<Complex>> sample_domain_points(const KernelSpec& spec, int count,
                                                       std::uint64_t seed, Real radius);

/// Modulus map of a point for domain membership: |z| (disc), euclidean norm
/// (ball), max_i |z_i| (polydisc).
Real domain_modulus(const KernelSpec& spec, const std::vector<Complex>& z);

}  // namespace cnpf
