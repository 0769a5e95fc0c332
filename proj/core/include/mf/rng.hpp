#pragma once

#include <cstdint>
#include <random>

#include "mf/field.hpp"
#include "mf/grid.hpp"

namespace mf {

/// Deterministic random source: same seed, same stream, every platform.
///
/// Built on mt19937_64 raw output only — the standard distributions are
/// implementation-defined, so doubles are derived by the fixed mapping
/// (x >> 11) * 2^-53.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Random band-limited mean-zero field: modes cos/sin(2*pi*(k*x + l*y)) with
/// 0 < k^2 + l^2 <= max_mode^2 and coefficients uniform on [-1, 1], then
/// projected to zero mean (exact for these modes; projection mops up
/// rounding). max_mode must stay below n/2.
MeanZeroField random_band_limited(const TorusGrid& grid, Rng& rng,
                                  int max_mode = 6);

/// Same, rescaled to prescribed H1 norm (throws if the draw is zero).
MeanZeroField random_direction(const TorusGrid& grid, Rng& rng,
                               double h1_target, int max_mode = 6);

}  // namespace mf
