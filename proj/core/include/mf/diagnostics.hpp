#pragma once

#include <string>
#include <vector>

#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"
#include "mf/minimax.hpp"

namespace mf {

/// One strict inequality: value versus bound.
struct BoundCheck {
  double value = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// Membership in the admissible region
///   lambda1 + lambda2 < mu1*|M|  and  max{lambda1, lambda2} > 8*pi
/// (both strict). margin is the smaller distance to the two boundaries.
struct RegionVerdict {
  bool in_region = false;
  BoundCheck sum_check;  // lambda1 + lambda2 < mu1*|M| = 4*pi^2
  BoundCheck max_check;  // max{lambda1, lambda2} > 8*pi
  double margin = 0.0;
};

RegionVerdict in_lambda(const Params& p, const TorusGrid& grid);

enum class Side { plus, minus };

struct Peak {
  Point location;
  Side side = Side::plus;
  double height = 0.0;            // value of u (resp. -u) at the peak
  double ball_mass = 0.0;         // integral of lambda_side * rho_side over
                                  // the torus ball around the peak
  double quantization_gap = 0.0;  // |ball_mass - 8*pi|
};

enum class Concentration { compact, one_sided, two_sided };

const char* to_string(Concentration c) noexcept;

struct ConcentrationReport {
  std::vector<Peak> peaks;
  double sup_plus = 0.0;   // max of u
  double sup_minus = 0.0;  // max of -u
  double peak_threshold = 0.0;
  double ball_radius = 0.0;
  Concentration classification = Concentration::compact;
};

/// Finds strict local maxima of u above peak_threshold (and of -u), merges
/// peaks of one side closer than 2*ball_radius (keeping the higher), and
/// integrates the side's density mass lambda_side * rho_side over torus balls
/// around the survivors. No peaks -> compact; one side -> one_sided; both ->
/// two_sided. ball_radius must lie in (0, 0.25].
ConcentrationReport concentration_report(const MeanZeroField& u,
                                         const Params& p, double ball_radius,
                                         double peak_threshold = 10.0);

/// Minimal two-sided concentration budget:
///   min{x + y : x, y >= 4*pi, (x - y)^2 = 8*pi*(x + y)} = 4*(3 + sqrt 5)*pi.
/// Computed from the closed form, cross-checked internally against a numeric
/// minimization over the constraint curve, and verified to dominate the chain
/// 4*(3+sqrt 5)*pi > 16*pi > mu1*|M|.
double two_sided_threshold();

struct SweepRow {
  Params p;
  RegionVerdict verdict;
  bool skipped = false;     // outside the region; solver not run
  bool converged = false;
  double c_est = 0.0;
  double residual = 0.0;    // L^2 residual after refinement
  double h1_norm = 0.0;     // of the refined field
  Concentration classification = Concentration::compact;
  std::string note;         // per-row failure diagnostics, empty when clean
};

/// Runs the minimax + refinement for every in-region parameter pair and
/// records the outcome; out-of-region rows are marked skipped. Row order
/// follows the input. Per-row failures land in `note`, never abort the sweep.
/// threads > 1 runs rows in parallel.
std::vector<SweepRow> sweep(const std::vector<Params>& params,
                            const TorusGrid& grid, const MinimaxOptions& opts,
                            double tol_residual, int threads = 1);

}  // namespace mf
