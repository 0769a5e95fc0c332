#pragma once

#include <complex>

// Internal FFT engine: unnormalized 2-D real transforms on n-by-n grids,
// backed by cached FFTW plans. Not installed; everything above this file
// speaks in Fields.

namespace mf::detail {

/// Real to half-complex spectrum (n rows by n/2+1 columns, row-major).
/// Unnormalized: divide by n^2 to get Fourier coefficients.
void forward_r2c(int n, const double* in, std::complex<double>* out);

/// Inverse of forward_r2c including the 1/n^2 normalization, so
/// inverse_c2r(forward_r2c(x)) == x up to rounding. The input spectrum is
/// copied internally (FFTW's c2r destroys its input).
void inverse_c2r(int n, const std::complex<double>* in, double* out);

/// Row index -> signed frequency: i <= n/2 ? i : i - n.
inline int signed_freq(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace mf::detail
