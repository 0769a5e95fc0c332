#include "mf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mf/spectral.hpp"
#include "sum.hpp"

namespace mf {
namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;
constexpr double kSixteenPi = 16.0 * std::numbers::pi;

/// Integral of lambda_side * density over the torus ball around a peak.
double ball_mass(const Field& density, double lambda_side, const Point& center,
                 double radius) {
  const TorusGrid& grid = density.grid();
  const int n = grid.n();
  detail::KahanSum sum;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (torus_distance(grid.node(i, j), center) <= radius) {
        sum.add(density(i, j));
      }
    }
  }
  return lambda_side * sum.value() * grid.h() * grid.h();
}

/// Strict local maxima of the side's values above the threshold, merged so
/// that no two survivors sit closer than 2*ball_radius (higher peak wins).
std::vector<Peak> side_peaks(const Field& values, Side side, double threshold,
                             double ball_radius) {
  const TorusGrid& grid = values.grid();
  const int n = grid.n();
  std::vector<Peak> found;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = values(i, j);
      if (v <= threshold) continue;
      bool strict_max = true;
      for (int di = -1; di <= 1 && strict_max; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = (i + di + n) % n;
          const int jj = (j + dj + n) % n;
          if (values(ii, jj) >= v) {
            strict_max = false;
            break;
          }
        }
      }
      if (strict_max) {
        Peak peak;
        peak.location = grid.node(i, j);
        peak.side = side;
        peak.height = v;
        found.push_back(peak);
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const Peak& a, const Peak& b) {
    if (a.height != b.height) return a.height > b.height;
    if (a.location.x != b.location.x) return a.location.x < b.location.x;
    return a.location.y < b.location.y;
  });

  std::vector<Peak> kept;
  for (const Peak& peak : found) {
    bool clear = true;
    for (const Peak& other : kept) {
      if (torus_distance(peak.location, other.location) < 2.0 * ball_radius) {
        clear = false;
        break;
      }
    }
    if (clear) kept.push_back(peak);
  }
  return kept;
}

}  // namespace

const char* to_string(Concentration c) noexcept {
  switch (c) {
    case Concentration::compact: return "compact";
    case Concentration::one_sided: return "one_sided";
    case Concentration::two_sided: return "two_sided";
  }
  return "unknown";
}

RegionVerdict in_lambda(const Params& p, const TorusGrid& grid) {
  RegionVerdict verdict;
  const double mu1 = first_eigenvalue(grid);  // times |M| = 1
  verdict.sum_check = BoundCheck{p.lambda1 + p.lambda2, mu1,
                                 p.lambda1 + p.lambda2 < mu1};
  const double max_lambda = std::max(p.lambda1, p.lambda2);
  verdict.max_check = BoundCheck{max_lambda, kEightPi, max_lambda > kEightPi};
  verdict.in_region = verdict.sum_check.holds && verdict.max_check.holds;
  verdict.margin = std::min(mu1 - verdict.sum_check.value,
                            max_lambda - kEightPi);
  return verdict;
}

ConcentrationReport concentration_report(const MeanZeroField& u,
                                         const Params& p, double ball_radius,
                                         double peak_threshold) {
  if (!(ball_radius > 0.0 && ball_radius <= 0.25)) {
    throw std::invalid_argument(
        "concentration_report: ball_radius must lie in (0, 0.25]");
  }
  ConcentrationReport report;
  report.ball_radius = ball_radius;
  report.peak_threshold = peak_threshold;
  report.sup_plus = max_value(u);
  report.sup_minus = -min_value(u);

  const Field& uf = u.field();
  const Field neg = -1.0 * uf;

  std::vector<Peak> plus, minus;
  if (report.sup_plus > peak_threshold) {
    plus = side_peaks(uf, Side::plus, peak_threshold, ball_radius);
    if (!plus.empty()) {
      const Field rho = normalized_density(uf, +1);
      for (Peak& peak : plus) {
        peak.ball_mass = ball_mass(rho, p.lambda1, peak.location, ball_radius);
        peak.quantization_gap = std::abs(peak.ball_mass - kEightPi);
      }
    }
  }
  if (report.sup_minus > peak_threshold) {
    minus = side_peaks(neg, Side::minus, peak_threshold, ball_radius);
    if (!minus.empty()) {
      const Field rho = normalized_density(uf, -1);
      for (Peak& peak : minus) {
        peak.ball_mass = ball_mass(rho, p.lambda2, peak.location, ball_radius);
        peak.quantization_gap = std::abs(peak.ball_mass - kEightPi);
      }
    }
  }

  const bool has_plus = !plus.empty();
  const bool has_minus = !minus.empty();
  report.peaks = std::move(plus);
  report.peaks.insert(report.peaks.end(), minus.begin(), minus.end());
  report.classification = has_plus && has_minus ? Concentration::two_sided
                          : has_plus || has_minus ? Concentration::one_sided
                                                  : Concentration::compact;
  return report;
}

double two_sided_threshold() {
  constexpr double pi = std::numbers::pi;
  const double closed_form = 4.0 * (3.0 + std::sqrt(5.0)) * pi;

  // Numeric cross-check. On the constraint curve (x-y)^2 = 8*pi*(x+y) with
  // s = x+y, the corner x,y >= 4*pi is feasible iff
  // f(s) = s - sqrt(8*pi*s) - 8*pi >= 0, and f is increasing, so the minimal
  // admissible s is the root of f. Bisection to machine precision.
  auto f = [pi](double s) { return s - std::sqrt(8.0 * pi * s) - 8.0 * pi; };
  double lo = kEightPi;  // f(lo) < 0
  double hi = 40.0 * pi; // f(hi) > 0
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double numeric = 0.5 * (lo + hi);
  if (std::abs(numeric - closed_form) > 1e-9 * closed_form) {
    throw std::logic_error("two_sided_threshold: numeric check disagrees with closed form");
  }
  // The chain that excludes simultaneous two-sided blow-up: the minimal
  // two-sided budget exceeds 16*pi, which exceeds mu1*|M| = 4*pi^2.
  if (!(closed_form > kSixteenPi && kSixteenPi > 4.0 * pi * pi)) {
    throw std::logic_error("two_sided_threshold: ordering chain violated");
  }
  return closed_form;
}

std::vector<SweepRow> sweep(const std::vector<Params>& params,
                            const TorusGrid& grid, const MinimaxOptions& opts,
                            double tol_residual, int threads) {
  opts.validate();
  if (!(tol_residual > 0.0)) {
    throw std::invalid_argument("sweep: tol_residual must be > 0");
  }

  std::vector<std::optional<SweepRow>> slots(params.size());
  auto run_row = [&](std::size_t idx) {
    const Params& p = params[idx];
    SweepRow row{p};
    row.verdict = in_lambda(p, grid);
    if (!row.verdict.in_region) {
      row.skipped = true;
      row.note = "outside admissible region";
      slots[idx] = std::move(row);
      return;
    }
    try {
      MinimaxResult mm = run_minimax(p, grid, opts);
      RefineResult refined = refine_critical(mm.argmax, p, tol_residual);
      row.c_est = mm.c_est;
      row.residual = refined.residual_l2;
      row.h1_norm = h1_norm(refined.u);
      row.classification =
          concentration_report(refined.u, p, 0.1).classification;
      row.converged = mm.converged && refined.reached_tol;
      if (!mm.converged) {
        row.note = "minimax did not converge";
      } else if (!refined.reached_tol) {
        row.note = "refinement missed tolerance";
      }
    } catch (const std::exception& err) {
      row.converged = false;
      row.note = err.what();
    }
    slots[idx] = std::move(row);
  };

  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(params.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < params.size(); ++i) run_row(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < params.size(); i += workers) run_row(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<SweepRow> rows;
  rows.reserve(params.size());
  for (std::optional<SweepRow>& slot : slots) rows.push_back(std::move(*slot));
  return rows;
}

}  // namespace mf
