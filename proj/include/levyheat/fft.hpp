#pragma once

#include <complex>
#include <vector>

#include "levyheat/common.hpp"

namespace levyheat::fft {

using cplx = std::complex<double>;

/// Real-to-complex transform (FFTW sign -1, unnormalized) of a row-major
/// array; the last axis of the output has n/2 + 1 entries.
std::vector<cplx> r2c(const Vec& in, const std::vector<int>& dims);

/// Complex-to-real transform (sign +1, unnormalized); inverse of r2c up to
/// the factor prod(dims).
Vec c2r(const std::vector<cplx>& in, const std::vector<int>& dims);

/// Number of complex entries produced by r2c for `dims`.
std::size_t half_size(const std::vector<int>& dims);

}  // namespace levyheat::fft
