#pragma once

#include <vector>

#include "cnpf/common.hpp"

namespace cnpf {

/// log Gamma on (0, inf), Lanczos approximation below 10 and Stirling with
/// Bernoulli corrections above; relative accuracy of Gamma better than 1e-13
/// throughout (0, 600) and beyond.
double log_gamma(double x);

/// Gamma(x) for x in (0, ~170); overflows above like the textbook function.
double gamma_fn(double x);

/// Ratios Gamma(n+1)/Gamma(n+1+a) for n = 0..N as a running product, so no
/// intermediate value ever overflows.  a > -1.
std::vector<double> gamma_ratio_table(double a, int N);

/// Gamma(x)/Gamma(x+a) for real x > 0 (continuous-argument version of the
/// table, used by tail asymptotics).  Stable for arbitrarily large x: big
/// arguments go through a symmetric-shift expansion rather than a difference
/// of log-gammas.
double gamma_ratio(double x, double a);

/// Gamma(z)/Gamma(z+a) for complex z with Re(z) >= 40 and |a| <= 2, by the
/// same symmetric-shift expansion.  The result's phase is a*arg(w) with
/// w = z + (a-1)/2, so precision survives arbitrarily large |Im z| where a
/// difference of log-gammas would drown in phase rounding.
Complex gamma_ratio_c(Complex z, double a);

}  // namespace cnpf
