#pragma once

#include <cstddef>
#include <vector>

#include "cnpf/common.hpp"

namespace cnpf::fft {

/// In-place complex DFT.  Forward is unnormalized; inverse divides by the
/// length, so inverse(forward(x)) == x up to rounding.
void transform(std::vector<Complex>& data, bool inverse);

/// Linear convolution c[m] = sum_j a[j] b[m-j], length |a|+|b|-1.
/// Small products run schoolbook; large ones go through zero-padded FFTs.
/// The cutover is a fixed constant, so results are bit-reproducible.
std::vector<Complex> convolve(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Correlation r[m] = sum_j conj(a[j]) b[j+m] for m = 0 .. |b|-1 (a shorter
/// or equal to b).  Used for coefficient-overlap sums of long series.
std::vector<Complex> correlate(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Forward DFT of real data (length a power of two): the n/2+1 nonredundant
/// bins, unnormalized to match transform().  Half the work and memory of the
/// complex transform, used by the long real-coefficient pipelines.
std::vector<Complex> real_transform(const std::vector<Real>& data);

/// Inverse of real_transform back to n real samples, divided by n, so
/// real_inverse(real_transform(x), x.size()) == x up to rounding.
std::vector<Real> real_inverse(const std::vector<Complex>& spec, std::size_t n);

/// Real-data versions of convolve and correlate (same contracts, real I/O).
std::vector<Real> convolve_real(const std::vector<Real>& a, const std::vector<Real>& b);
std::vector<Real> correlate_real(const std::vector<Real>& a, const std::vector<Real>& b);

/// Smallest power of two >= n.
std::size_t good_size(std::size_t n);

}  // namespace cnpf::fft
