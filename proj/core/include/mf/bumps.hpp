#pragma once

#include <vector>

#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"

namespace mf {

/// Parameters of one logarithmic bubble: profile ln eps^2/(eps^2 + d^2)^2
/// inside the ball of radius r0 around center, constant outside.
struct BumpSpec {
  Point center{0.5, 0.5};
  double eps = 0.0;
  double r0 = 0.25;
};

/// Checks 0 < r0 < 0.5 (injectivity radius), 0 < eps <= r0/2 (ball-dominated
/// profile), and eps >= 4h (grid resolvability). Throws on violation.
void validate(const BumpSpec& spec, const TorusGrid& grid);

/// Samples the truncated bubble and projects it to zero mean. The output is
/// flagged kinked: the gradient jumps at the truncation radius, so Dirichlet
/// energies go through the finite-difference path.
MeanZeroField build_u_eps(const BumpSpec& spec, const TorusGrid& grid);

struct ExpansionRow {
  double eps = 0.0;
  double dirichlet = 0.0;      // integral of |grad u_eps|^2 (not halved)
  double ln_int_exp_plus = 0.0;
  double ln_int_exp_minus = 0.0;
  double i_value = 0.0;        // eval_I(u_eps, p).total
};

/// Ordinary least-squares line y = slope*x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Fits ys against xs by ordinary least squares. Requires >= 2 points.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

/// Each energy column of the rows regressed against ln(1/eps).
struct ExpansionReport {
  std::vector<ExpansionRow> rows;  // sorted by decreasing eps
  LineFit dirichlet;
  LineFit ln_exp_plus;
  LineFit ln_exp_minus;
  LineFit i_value;
};

/// Builds u_eps for every entry of eps_list (strictly decreasing, >= 4
/// values), evaluates the energy columns, and fits each against ln(1/eps).
/// threads > 1 computes rows in parallel; assembly order is fixed by eps.
ExpansionReport expansion_report(const Point& center, double r0,
                                 const std::vector<double>& eps_list,
                                 const Params& p, const TorusGrid& grid,
                                 int threads = 1);

}  // namespace mf
