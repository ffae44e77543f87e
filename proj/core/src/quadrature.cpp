#include "cnpf/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cnpf/rng.hpp"

namespace cnpf {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

}  // namespace

Quadrature1D gauss_legendre(int n) {
    if (n < 1) throw TargetOutOfRange("quadrature needs at least one node");
    Quadrature1D q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev guess, then Newton on P_n.
        Real x = std::cos(kPi * (static_cast<Real>(i) + 0.75) / (static_cast<Real>(n) + 0.5));
        Real pp = 0;
        for (int it = 0; it < 100; ++it) {
            Real p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1);
            const Real dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const Real w = 2 / ((1 - x * x) * pp * pp);
        q.nodes[static_cast<std::size_t>(i)] = -x;
        q.weights[static_cast<std::size_t>(i)] = w;
        q.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        q.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return q;
}

Quadrature1D gauss_legendre_ab(int n, Real a, Real b) {
    Quadrature1D q = gauss_legendre(n);
    const Real mid = (a + b) / 2, rad = (b - a) / 2;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        q.nodes[i] = mid + rad * q.nodes[i];
        q.weights[i] *= rad;
    }
    return q;
}

Quadrature1D gauss_jacobi01(int n, Real beta) {
    if (n < 1) throw TargetOutOfRange("quadrature needs at least one node");
    if (!(beta > -1)) throw TargetOutOfRange("Jacobi weight exponent must exceed -1");
    // Golub-Welsch for weight (1-x)^beta on [-1, 1] (Jacobi a = beta, b = 0),
    // then map to [0, 1].
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const Real den = (2 * k + beta) * (2 * k + beta + 2);
        J(k, k) = den != 0 ? -beta * beta / den : -beta / (beta + 2);
    }
    for (int k = 1; k < n; ++k) {
        const Real num = 4.0 * k * k * (k + beta) * (k + beta);
        const Real den =
            (2 * k + beta) * (2 * k + beta) * (2 * k + beta + 1) * (2 * k + beta - 1);
        const Real off = std::sqrt(num / den);
        J(k, k - 1) = off;
        J(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const Real mu0 = std::pow(Real(2), beta + 1) / (beta + 1);  // int (1-x)^beta dx
    Quadrature1D q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Real x = es.eigenvalues()(i);
        const Real v0 = es.eigenvectors()(0, i);
        q.nodes[static_cast<std::size_t>(i)] = (1 + x) / 2;
        // int_0^1 (1-t)^beta g dt = (1 / 2^{beta+1}) int_{-1}^1 (1-x)^beta g dx
        q.weights[static_cast<std::size_t>(i)] =
            mu0 * v0 * v0 / std::pow(Real(2), beta + 1);
    }
    return q;
}

Real DiscMeasure::mass() const {
    Real m = 0;
    for (Real w : weights) m += w;
    return m;
}

DiscMeasure point_mass(Complex at, Real weight) {
    DiscMeasure mu;
    mu.nodes.push_back(at);
    mu.weights.push_back(weight);
    return mu;
}

DiscMeasure area_measure(int radial_nodes, int angular_nodes) {
    // (1/pi) dA = dt x (dtheta / 2pi) with t = r^2.
    const Quadrature1D gt = gauss_jacobi01(radial_nodes, 0);
    DiscMeasure mu;
    mu.nodes.reserve(static_cast<std::size_t>(radial_nodes * angular_nodes));
    mu.weights.reserve(mu.nodes.capacity());
    for (int i = 0; i < radial_nodes; ++i) {
        const Real r = std::sqrt(gt.nodes[static_cast<std::size_t>(i)]);
        for (int j = 0; j < angular_nodes; ++j) {
            const Real th = 2 * kPi * j / angular_nodes;
            mu.nodes.push_back(Complex(r * std::cos(th), r * std::sin(th)));
            mu.weights.push_back(gt.weights[static_cast<std::size_t>(i)] / angular_nodes);
        }
    }
    return mu;
}

namespace {

Complex herglotz_factor(Complex herm) { return (Complex(1) + herm) / (Complex(1) - herm); }

}  // namespace

std::vector<Complex> sarason_by_quadrature(const KernelSpec& space, const VectorSeries& F,
                                           const std::vector<std::vector<Complex>>& grid,
                                           int radial_nodes, int angular_nodes) {
    validate(space);
    if (F.dim() != space.dim) throw DimensionMismatch("F dimension does not match the space");
    if (static_cast<long long>(radial_nodes) * angular_nodes * angular_nodes > 100000000LL)
        throw QuadratureBudgetExceeded("node budget too large");
    std::vector<Complex> out(grid.size(), Complex(0));

    if (space.family == KernelFamily::BergmanDiscWeighted) {
        // dm = (beta+1)(1-t)^beta dt x dtheta/2pi, t = r^2; Gauss-Jacobi
        // handles the (1-t)^beta factor exactly.
        Quadrature1D gt = gauss_jacobi01(radial_nodes, space.beta);
        for (Real& w : gt.weights) w *= (space.beta + 1);
        for (int i = 0; i < radial_nodes; ++i) {
            const Real r = std::sqrt(gt.nodes[static_cast<std::size_t>(i)]);
            for (int j = 0; j < angular_nodes; ++j) {
                const Real th = 2 * kPi * j / angular_nodes;
                const Complex w(r * std::cos(th), r * std::sin(th));
                const Real f2 = F.value_norm_sq({w});
                const Real wt = gt.weights[static_cast<std::size_t>(i)] / angular_nodes;
                for (std::size_t gidx = 0; gidx < grid.size(); ++gidx)
                    out[gidx] += wt * f2 * herglotz_factor(grid[gidx][0] * std::conj(w));
            }
        }
        return out;
    }
    if (space.family == KernelFamily::HardyBall || space.family == KernelFamily::SzegoDisc) {
        if (space.dim == 1) {
            // Boundary circle, normalized arc length.
            for (int j = 0; j < angular_nodes; ++j) {
                const Real th = 2 * kPi * j / angular_nodes;
                const Complex w(std::cos(th), std::sin(th));
                const Real f2 = F.value_norm_sq({w});
                for (std::size_t gidx = 0; gidx < grid.size(); ++gidx)
                    out[gidx] += f2 / angular_nodes *
                                 herglotz_factor(grid[gidx][0] * std::conj(w));
            }
            return out;
        }
        if (space.dim == 2) {
            // Sphere S^3: w = (sqrt(1-t) e^{i p1}, sqrt(t) e^{i p2}),
            // dsigma = dt (dp1/2pi)(dp2/2pi).
            const Quadrature1D gt = gauss_jacobi01(radial_nodes, 0);
            for (int i = 0; i < radial_nodes; ++i) {
                const Real t = gt.nodes[static_cast<std::size_t>(i)];
                const Real r1 = std::sqrt(1 - t), r2 = std::sqrt(t);
                for (int j1 = 0; j1 < angular_nodes; ++j1) {
                    const Real p1 = 2 * kPi * j1 / angular_nodes;
                    const Complex w1(r1 * std::cos(p1), r1 * std::sin(p1));
                    for (int j2 = 0; j2 < angular_nodes; ++j2) {
                        const Real p2 = 2 * kPi * j2 / angular_nodes;
                        const Complex w2(r2 * std::cos(p2), r2 * std::sin(p2));
                        const Real f2 = F.value_norm_sq({w1, w2});
                        const Real wt = gt.weights[static_cast<std::size_t>(i)] /
                                        (static_cast<Real>(angular_nodes) * angular_nodes);
                        for (std::size_t gidx = 0; gidx < grid.size(); ++gidx) {
                            const Complex herm = grid[gidx][0] * std::conj(w1) +
                                                 grid[gidx][1] * std::conj(w2);
                            out[gidx] += wt * f2 * herglotz_factor(herm);
                        }
                    }
                }
            }
            return out;
        }
    }
    throw UnsupportedFamily("quadrature route covers Bergman and Hardy (d <= 2) spaces");
}

CarlesonReport carleson_check(const KernelSpec& s, const DiscMeasure& mu, int f_degree,
                              int trials, std::uint64_t seed, Real grid_max_radius,
                              int grid_angles) {
    validate(s);
    if (s.dim != 1) throw DimensionMismatch("Carleson check is univariate");
    if (mu.nodes.size() != mu.weights.size())
        throw DimensionMismatch("measure nodes and weights differ in length");
    CarlesonReport rep;

    // sup_z Re int s_z dmu via complex moments: int s_z dmu =
    // sum_m prof_m conj(z)^m M_m with M_m = int w^m dmu.
    Real R = 0;
    for (const Complex& w : mu.nodes) R = std::max(R, std::abs(w));
    const Real q = R * grid_max_radius;
    if (q >= 0.99999) throw QuadratureBudgetExceeded("measure and grid both touch the boundary");
    const Real mass = mu.mass();
    int N = 64;
    if (q > 0) {
        const Real target = std::log(1e-14 / (mass + 1)) / std::log(q);
        N = static_cast<int>(std::min<Real>(400000, std::max<Real>(64, target)));
    }
    const std::vector<Real> prof = radial_profile(s, N);
    std::vector<Complex> mom(static_cast<std::size_t>(N) + 1, Complex(0));
    for (std::size_t j = 0; j < mu.nodes.size(); ++j) {
        Complex p(1);
        for (std::size_t m = 0; m < mom.size(); ++m) {
            mom[m] += mu.weights[j] * p;
            p *= mu.nodes[j];
        }
    }
    std::vector<Complex> coef(mom.size());
    for (std::size_t m = 0; m < mom.size(); ++m) coef[m] = prof[m] * mom[m];
    const std::vector<Real> radii = {0,    0.1,  0.2,  0.3,  0.4,   0.5,   0.6,  0.7,
                                     0.8,  0.9,  0.95, 0.98, 0.99,  0.995, 0.999};
    for (Real r : radii) {
        if (r > grid_max_radius) continue;
        for (int j = 0; j < grid_angles; ++j) {
            const Real th = 2 * kPi * j / grid_angles;
            const Complex zbar(r * std::cos(th), -r * std::sin(th));
            Complex acc(0);
            for (std::size_t m = coef.size(); m-- > 0;) acc = acc * zbar + coef[m];
            rep.sup_re = std::max(rep.sup_re, acc.real());
        }
    }

    // Embedding constant: generalized eigenproblem A v = lambda B v with
    // A the L2(mu) Gram of monomials and B = diag(1/c_n).
    const int D = f_degree;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(D + 1, D + 1);
    for (std::size_t j = 0; j < mu.nodes.size(); ++j) {
        std::vector<Complex> pw(static_cast<std::size_t>(D) + 1);
        Complex p(1);
        for (int m = 0; m <= D; ++m) {
            pw[static_cast<std::size_t>(m)] = p;
            p *= mu.nodes[j];
        }
        for (int m = 0; m <= D; ++m)
            for (int n = 0; n <= D; ++n)
                A(m, n) += mu.weights[j] * pw[static_cast<std::size_t>(m)] *
                           std::conj(pw[static_cast<std::size_t>(n)]);
    }
    const std::vector<Real> nsq = monomial_norms_sq(s, D);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(D + 1, D + 1);
    for (int m = 0; m <= D; ++m) B(m, m) = nsq[static_cast<std::size_t>(m)];
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(A, B);
    rep.embedding_constant = ges.eigenvalues().maxCoeff();

    // Random polynomials can only see ratios below the eigenvalue bound.
    Xoshiro256 root(seed);
    for (int t = 0; t < trials; ++t) {
        Xoshiro256 rng = root.split(static_cast<std::uint64_t>(t));
        Eigen::VectorXcd c(D + 1);
        for (int m = 0; m <= D; ++m) c(m) = rng.next_complex_normal();
        const Real num = ((c.adjoint() * A * c)(0, 0)).real();
        const Real den = ((c.adjoint() * B * c)(0, 0)).real();
        if (den > 0) rep.sampled_max_ratio = std::max(rep.sampled_max_ratio, num / den);
    }
    rep.sampled_consistent =
        rep.sampled_max_ratio <= rep.embedding_constant * (1 + 1e-10) + 1e-12;
    return rep;
}

}  // namespace cnpf
