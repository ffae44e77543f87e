#include "cnpf/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>

namespace cnpf::fft {

namespace {

// FFTW's planner is not thread-safe; executions on private buffers are.
std::mutex g_planner_mutex;

struct PlanPair {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    PlanPair() = default;
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
    ~PlanPair() {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

// One cache per thread: plans execute on the thread's own buffer.
PlanPair& plan_for(std::size_t n) {
    thread_local std::map<std::size_t, PlanPair> cache;
    PlanPair& p = cache[n];
    if (!p.buf) {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        p.buf = fftw_alloc_complex(n);
        const int ni = static_cast<int>(n);
        p.fwd = fftw_plan_dft_1d(ni, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_1d(ni, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    return p;
}

struct RealPlanPair {
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    RealPlanPair() = default;
    RealPlanPair(const RealPlanPair&) = delete;
    RealPlanPair& operator=(const RealPlanPair&) = delete;
    ~RealPlanPair() {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (rbuf) fftw_free(rbuf);
        if (cbuf) fftw_free(cbuf);
    }
};

RealPlanPair& real_plan_for(std::size_t n) {
    thread_local std::map<std::size_t, RealPlanPair> cache;
    RealPlanPair& p = cache[n];
    if (!p.rbuf) {
        std::lock_guard<std::mutex> lock(g_planner_mutex);
        p.rbuf = fftw_alloc_real(n);
        p.cbuf = fftw_alloc_complex(n / 2 + 1);
        const int ni = static_cast<int>(n);
        p.fwd = fftw_plan_dft_r2c_1d(ni, p.rbuf, p.cbuf, FFTW_ESTIMATE);
        p.bwd = fftw_plan_dft_c2r_1d(ni, p.cbuf, p.rbuf, FFTW_ESTIMATE);
    }
    return p;
}

constexpr std::size_t kSchoolbookLimit = 1 << 16;  // |a|*|b| at or below: direct sum

}  // namespace

std::size_t good_size(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

void transform(std::vector<Complex>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n <= 1) return;
    PlanPair& p = plan_for(n);
    std::memcpy(p.buf, data.data(), n * sizeof(Complex));
    fftw_execute(inverse ? p.bwd : p.fwd);
    std::memcpy(data.data(), p.buf, n * sizeof(Complex));
    if (inverse) {
        const Real scale = Real(1) / static_cast<Real>(n);
        for (Complex& c : data) c *= scale;
    }
}

std::vector<Complex> convolve(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t na = a.size(), nb = b.size();
    const std::size_t nc = na + nb - 1;
    if (na * nb <= kSchoolbookLimit) {
        std::vector<Complex> c(nc, Complex(0));
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nb; ++j) c[i + j] += a[i] * b[j];
        return c;
    }
    const std::size_t m = good_size(nc);
    std::vector<Complex> fa(m, Complex(0)), fb(m, Complex(0));
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    transform(fa, false);
    transform(fb, false);
    for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
    transform(fa, true);
    fa.resize(nc);
    return fa;
}

std::vector<Complex> real_transform(const std::vector<Real>& data) {
    const std::size_t n = data.size();
    if (n <= 1) return std::vector<Complex>(data.begin(), data.end());
    RealPlanPair& p = real_plan_for(n);
    std::memcpy(p.rbuf, data.data(), n * sizeof(Real));
    fftw_execute(p.fwd);
    std::vector<Complex> spec(n / 2 + 1);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = Complex(p.cbuf[i][0], p.cbuf[i][1]);
    return spec;
}

std::vector<Real> real_inverse(const std::vector<Complex>& spec, std::size_t n) {
    if (n <= 1) {
        std::vector<Real> out(n);
        if (n == 1) out[0] = spec.at(0).real();
        return out;
    }
    RealPlanPair& p = real_plan_for(n);
    for (std::size_t i = 0; i < n / 2 + 1; ++i) {
        p.cbuf[i][0] = spec[i].real();
        p.cbuf[i][1] = spec[i].imag();
    }
    fftw_execute(p.bwd);
    std::vector<Real> out(n);
    const Real scale = Real(1) / static_cast<Real>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = p.rbuf[i] * scale;
    return out;
}

std::vector<Real> convolve_real(const std::vector<Real>& a, const std::vector<Real>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t na = a.size(), nb = b.size();
    const std::size_t nc = na + nb - 1;
    if (na * nb <= kSchoolbookLimit) {
        std::vector<Real> c(nc, 0.0);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < nb; ++j) c[i + j] += a[i] * b[j];
        return c;
    }
    const std::size_t m = good_size(nc);
    std::vector<Real> pa(m, 0.0), pb(m, 0.0);
    std::copy(a.begin(), a.end(), pa.begin());
    std::copy(b.begin(), b.end(), pb.begin());
    std::vector<Complex> fa = real_transform(pa);
    const std::vector<Complex> fb = real_transform(pb);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    std::vector<Real> c = real_inverse(fa, m);
    c.resize(nc);
    return c;
}

std::vector<Real> correlate_real(const std::vector<Real>& a, const std::vector<Real>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t na = a.size(), nb = b.size();
    if (na * nb <= kSchoolbookLimit) {
        std::vector<Real> r(nb, 0.0);
        for (std::size_t m = 0; m < nb; ++m)
            for (std::size_t j = 0; j < na && j + m < nb; ++j) r[m] += a[j] * b[j + m];
        return r;
    }
    std::vector<Real> ar(a.rbegin(), a.rend());
    const std::vector<Real> full = convolve_real(ar, b);
    std::vector<Real> r(nb, 0.0);
    for (std::size_t m = 0; m < nb && na - 1 + m < full.size(); ++m) r[m] = full[na - 1 + m];
    return r;
}

std::vector<Complex> correlate(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t na = a.size(), nb = b.size();
    if (na * nb <= kSchoolbookLimit) {
        std::vector<Complex> r(nb, Complex(0));
        for (std::size_t m = 0; m < nb; ++m)
            for (std::size_t j = 0; j < na && j + m < nb; ++j) r[m] += std::conj(a[j]) * b[j + m];
        return r;
    }
    // Correlation is convolution with the conjugate-reversed first factor.
    std::vector<Complex> ar(na);
    for (std::size_t j = 0; j < na; ++j) ar[j] = std::conj(a[na - 1 - j]);
    std::vector<Complex> full = convolve(ar, b);
    // r[m] = full[na - 1 + m]
    std::vector<Complex> r(nb, Complex(0));
    for (std::size_t m = 0; m < nb && na - 1 + m < full.size(); ++m) r[m] = full[na - 1 + m];
    return r;
}

}  // namespace cnpf::fft
