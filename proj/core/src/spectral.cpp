#include "mf/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "sum.hpp"

namespace mf {
namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

std::vector<std::complex<double>> spectrum_of(const Field& u) {
  const int n = u.grid().n();
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(n) * (n / 2 + 1));
  detail::forward_r2c(n, u.values().data(), spec.data());
  return spec;
}

/// Multiplies each stored mode by factor(k^2 + l^2); the zero mode is always
/// set to zero, so outputs are mean-free regardless of the input.
template <typename Factor>
Field apply_multiplier(const Field& u, Factor&& factor) {
  const int n = u.grid().n();
  const int cols = n / 2 + 1;
  std::vector<std::complex<double>> spec = spectrum_of(u);
  for (int i = 0; i < n; ++i) {
    const int k = detail::signed_freq(i, n);
    for (int j = 0; j < cols; ++j) {
      const int m2 = k * k + j * j;
      std::complex<double>& c = spec[static_cast<std::size_t>(i) * cols + j];
      c = (m2 == 0) ? 0.0 : c * factor(m2);
    }
  }
  std::vector<double> values(u.grid().size());
  detail::inverse_c2r(n, spec.data(), values.data());
  return Field(u.grid(), std::move(values), Smoothness::smooth);
}

double h1_norm_sq_spectral(const Field& u) {
  const int n = u.grid().n();
  const int cols = n / 2 + 1;
  const std::vector<std::complex<double>> spec = spectrum_of(u);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  detail::KahanSum sum;
  for (int i = 0; i < n; ++i) {
    const int k = detail::signed_freq(i, n);
    for (int j = 0; j < cols; ++j) {
      const int m2 = k * k + j * j;
      if (m2 == 0) continue;
      // Columns 0 < j < n/2 represent a conjugate pair; the edge columns
      // appear once.
      const double weight = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      const std::complex<double> c = spec[static_cast<std::size_t>(i) * cols + j];
      sum.add(weight * kFourPiSq * m2 * std::norm(c) * scale * scale);
    }
  }
  return sum.value();
}

double h1_norm_sq_finite_difference(const Field& u) {
  const int n = u.grid().n();
  const double h = u.grid().h();
  const double inv2h = 1.0 / (2.0 * h);
  detail::KahanSum sum;
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n;
    const int im = (i + n - 1) % n;
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1) % n;
      const int jm = (j + n - 1) % n;
      const double gx = (u(ip, j) - u(im, j)) * inv2h;
      const double gy = (u(i, jp) - u(i, jm)) * inv2h;
      sum.add(gx * gx + gy * gy);
    }
  }
  return sum.value() * h * h;
}

}  // namespace

Field minus_laplacian(const Field& u) {
  return apply_multiplier(u, [](int m2) { return kFourPiSq * m2; });
}

MeanZeroField inv_minus_laplacian(const Field& f) {
  const double m = mean(f);
  if (std::abs(m) > 1e-12 * (1.0 + max_abs(f))) {
    throw std::invalid_argument(
        "inv_minus_laplacian: input has nonzero mean (kernel direction)");
  }
  Field w = apply_multiplier(f, [](int m2) { return 1.0 / (kFourPiSq * m2); });
  return MeanZeroField::project(std::move(w));
}

Field inv_sqrt_minus_laplacian(const Field& f) {
  return apply_multiplier(
      f, [](int m2) { return 1.0 / std::sqrt(kFourPiSq * m2); });
}

double h1_norm_sq(const Field& u) {
  return u.smooth() ? h1_norm_sq_spectral(u) : h1_norm_sq_finite_difference(u);
}

double h1_norm(const Field& u) { return std::sqrt(h1_norm_sq(u)); }

double first_eigenvalue(const TorusGrid& grid) {
  // Smallest nonzero discrete multiplier 4*pi^2*(k^2+l^2); the scan is cheap
  // and keeps this honest under any future multiplier change.
  const int half = grid.n() / 2;
  double best = kFourPiSq * 2.0 * half * half;
  for (int k = 0; k <= half; ++k) {
    for (int l = 0; l <= half; ++l) {
      if (k == 0 && l == 0) continue;
      best = std::min(best, kFourPiSq * (k * k + l * l));
    }
  }
  return best;
}

EigenvalueCheck eigenvalue_window(const TorusGrid& grid) {
  EigenvalueCheck check;
  check.mu1 = first_eigenvalue(grid);
  check.lower = 8.0 * std::numbers::pi;
  check.upper = 16.0 * std::numbers::pi;
  // |M| = 1, so mu1*|M| is mu1 itself.
  check.in_window = check.lower < check.mu1 && check.mu1 < check.upper;
  return check;
}

}  // namespace mf
