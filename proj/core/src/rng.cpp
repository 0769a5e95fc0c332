#include "mf/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mf/spectral.hpp"

namespace mf {

MeanZeroField random_band_limited(const TorusGrid& grid, Rng& rng, int max_mode) {
  if (max_mode < 1 || max_mode >= grid.n() / 2) {
    throw std::invalid_argument("random_band_limited: max_mode out of range");
  }
  const int n = grid.n();
  std::vector<double> values(grid.size(), 0.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  // Loop order over (k, l) is part of the determinism contract: coefficients
  // are drawn in a fixed sequence.
  for (int k = -max_mode; k <= max_mode; ++k) {
    for (int l = 0; l <= max_mode; ++l) {
      if (l == 0 && k <= 0) continue;  // one representative per (k,l)/(-k,-l)
      if (k * k + l * l > max_mode * max_mode) continue;
      const double a = rng.uniform(-1.0, 1.0);
      const double b = rng.uniform(-1.0, 1.0);
      for (int i = 0; i < n; ++i) {
        const double x = grid.coord(i);
        for (int j = 0; j < n; ++j) {
          const double phase = two_pi * (k * x + l * grid.coord(j));
          values[static_cast<std::size_t>(i) * n + j] +=
              a * std::cos(phase) + b * std::sin(phase);
        }
      }
    }
  }
  return MeanZeroField::project(Field(grid, std::move(values), Smoothness::smooth));
}

MeanZeroField random_direction(const TorusGrid& grid, Rng& rng, double h1_target,
                               int max_mode) {
  MeanZeroField u = random_band_limited(grid, rng, max_mode);
  const double norm = h1_norm(u);
  if (norm == 0.0) {
    throw std::runtime_error("random_direction: drew the zero field");
  }
  return (h1_target / norm) * u;
}

}  // namespace mf
