#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

/// Shared scalar types, error taxonomy and small numeric helpers used by
/// every module of the library.
namespace cnpf {

using Real = double;
using Complex = std::complex<double>;

// ---- error taxonomy -------------------------------------------------------
// Every precondition violation throws a subclass of Error carrying a short
// machine-readable code; the CLI maps any Error to exit code 2 (usage/config)
// or 1 (check failed) as appropriate.

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define CNPF_DEFINE_ERROR(NAME)                                              \
    class NAME : public Error {                                              \
    public:                                                                  \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}       \
    }

CNPF_DEFINE_ERROR(PointOutsideDomain);
CNPF_DEFINE_ERROR(NumericOverflow);
CNPF_DEFINE_ERROR(UnsupportedFamily);
CNPF_DEFINE_ERROR(NotCNP);
CNPF_DEFINE_ERROR(NonNormalized);
CNPF_DEFINE_ERROR(NotHermitian);
CNPF_DEFINE_ERROR(DivisionByZero);
CNPF_DEFINE_ERROR(DimensionMismatch);
CNPF_DEFINE_ERROR(OrderMismatch);
CNPF_DEFINE_ERROR(ZeroConstantTerm);
CNPF_DEFINE_ERROR(NotUnivariate);
CNPF_DEFINE_ERROR(NonRadialUnsupported);
CNPF_DEFINE_ERROR(NotUnitNorm);
CNPF_DEFINE_ERROR(DegenerateConstraint);
CNPF_DEFINE_ERROR(QuadratureBudgetExceeded);
CNPF_DEFINE_ERROR(AlphaOutOfRange);
CNPF_DEFINE_ERROR(TailTooLarge);
CNPF_DEFINE_ERROR(TargetOutOfRange);
CNPF_DEFINE_ERROR(ConfigParse);

#undef CNPF_DEFINE_ERROR

// ---- deterministic summation ----------------------------------------------

/// Pairwise (fixed binary tree) summation: deterministic regardless of
/// threading and far more accurate than left-to-right accumulation.
template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    std::function<T(std::size_t, std::size_t)> rec =
        [&](std::size_t lo, std::size_t hi) -> T {
        if (hi - lo <= 8) {
            T acc{};
            for (std::size_t i = lo; i < hi; ++i) acc += v[i];
            return acc;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return v.empty() ? T{} : rec(0, v.size());
}

/// Pairwise summation of term(i) for i in [0, n) without materializing the
/// terms.  Same tree shape as the vector overload.
template <typename T, typename F>
T pairwise_sum_n(std::size_t n, F&& term) {
    std::function<T(std::size_t, std::size_t)> rec =
        [&](std::size_t lo, std::size_t hi) -> T {
        if (hi - lo <= 8) {
            T acc{};
            for (std::size_t i = lo; i < hi; ++i) acc += term(i);
            return acc;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return n == 0 ? T{} : rec(0, n);
}

// ---- parallelism ----------------------------------------------------------

/// Number of worker threads: min(hardware, CNPF_THREADS if set).  Always >= 1.
unsigned thread_budget();

/// Deterministic parallel map: runs fn(i) for i in [0, n) on the thread
/// budget.  fn must write only to slot i of preallocated storage, so the
/// result is identical to the serial run.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cnpf
