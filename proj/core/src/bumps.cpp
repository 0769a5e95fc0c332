#include "mf/bumps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mf {

void validate(const BumpSpec& spec, const TorusGrid& grid) {
  if (!(spec.r0 > 0.0 && spec.r0 < 0.5)) {
    throw std::invalid_argument(
        "BumpSpec: r0 must lie in (0, 0.5) (injectivity radius), got " +
        std::to_string(spec.r0));
  }
  if (!(spec.eps > 0.0 && spec.eps <= spec.r0 / 2.0)) {
    throw std::invalid_argument(
        "BumpSpec: eps must lie in (0, r0/2], got " + std::to_string(spec.eps));
  }
  if (spec.eps < 4.0 * grid.h()) {
    throw std::invalid_argument("BumpSpec: eps = " + std::to_string(spec.eps) +
                                " under-resolved on n = " +
                                std::to_string(grid.n()) + " (needs eps >= 4h)");
  }
}

MeanZeroField build_u_eps(const BumpSpec& spec, const TorusGrid& grid) {
  validate(spec, grid);
  const double e2 = spec.eps * spec.eps;
  const double outside = std::log(e2 / ((e2 + spec.r0 * spec.r0) * (e2 + spec.r0 * spec.r0)));
  const int n = grid.n();
  std::vector<double> values(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = torus_distance(grid.node(i, j), spec.center);
      values[static_cast<std::size_t>(i) * n + j] =
          d < spec.r0
              ? std::log(e2 / ((e2 + d * d) * (e2 + d * d)))
              : outside;
    }
  }
  // The profile is continuous but its gradient jumps at r0, so the field is
  // flagged kinked and Dirichlet energies take the finite-difference path.
  return MeanZeroField::project(Field(grid, std::move(values), Smoothness::kinked));
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  }
  const double inv_n = 1.0 / static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx *= inv_n;
  my *= inv_n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("fit_line: degenerate abscissae");
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.max_residual = std::max(
        fit.max_residual, std::abs(ys[i] - (fit.slope * xs[i] + fit.intercept)));
  }
  return fit;
}

ExpansionReport expansion_report(const Point& center, double r0,
                                 const std::vector<double>& eps_list,
                                 const Params& p, const TorusGrid& grid,
                                 int threads) {
  if (eps_list.size() < 4) {
    throw std::invalid_argument("expansion_report: need >= 4 eps values for a fit");
  }
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i) {
    if (!(eps_list[i] > eps_list[i + 1])) {
      throw std::invalid_argument("expansion_report: eps_list must be strictly decreasing");
    }
  }
  for (double eps : eps_list) {
    validate(BumpSpec{center, eps, r0}, grid);
  }

  std::vector<ExpansionRow> rows(eps_list.size());
  auto compute_row = [&](std::size_t idx) {
    const double eps = eps_list[idx];
    const MeanZeroField u = build_u_eps(BumpSpec{center, eps, r0}, grid);
    const EnergyBreakdown e = eval_I(u, p);
    ExpansionRow row;
    row.eps = eps;
    row.dirichlet = 2.0 * e.dirichlet;  // report the full integral of |grad u|^2
    row.ln_int_exp_plus = e.g_plus;
    row.ln_int_exp_minus = e.g_minus;
    row.i_value = e.total;
    rows[idx] = row;
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(rows.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) compute_row(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < rows.size(); i += workers) compute_row(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<double> xs(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) xs[i] = std::log(1.0 / rows[i].eps);

  auto column = [&](double ExpansionRow::* member) {
    std::vector<double> ys(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) ys[i] = rows[i].*member;
    return ys;
  };

  ExpansionReport report;
  report.dirichlet = fit_line(xs, column(&ExpansionRow::dirichlet));
  report.ln_exp_plus = fit_line(xs, column(&ExpansionRow::ln_int_exp_plus));
  report.ln_exp_minus = fit_line(xs, column(&ExpansionRow::ln_int_exp_minus));
  report.i_value = fit_line(xs, column(&ExpansionRow::i_value));
  report.rows = std::move(rows);
  return report;
}

}  // namespace mf
