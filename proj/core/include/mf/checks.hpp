#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mf/grid.hpp"

namespace mf {

struct CheckOutcome {
  std::string suite;
  bool passed = false;
  std::string detail;  // short summary, or the reason for failure
};

struct CheckConfig {
  std::uint64_t seed = 42;
  // Hook for mutation testing of the harness itself: flips the sign of the
  // residual inside the gradient-consistency suite, which must then fail.
  bool mutate_residual_sign = false;
};

/// Runs every invariant suite (quadrature exactness, spectral round trips,
/// eigenvalue and Poincare checks, Jensen/convexity/symmetry/monotonicity of
/// the energy, gradient-versus-finite-difference consistency, inequality
/// shapes, region geometry, blow-up arithmetic) on the given grid. Order and
/// content are deterministic for a fixed seed.
std::vector<CheckOutcome> run_check_suites(const TorusGrid& grid,
                                           const CheckConfig& cfg);

}  // namespace mf
