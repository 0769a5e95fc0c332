#include "mf/checks.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mf/bumps.hpp"
#include "mf/diagnostics.hpp"
#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/rng.hpp"
#include "mf/spectral.hpp"
#include "sum.hpp"

namespace mf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

// Inequality-shape constants, fitted once over the reference corpus
// (seed 42, n = 128: band-limited fields across amplitudes plus the bubble
// family at both signs) and frozen with ~25% headroom. The fitted maxima were
// exp(-0.00478) for the first (the bubbles are near-extremal, so the sup is
// essentially 1) and 0.0335 for the second; the suites assert the shape of
// the bounds, not sharp values.
constexpr double kFittedC0 = 1.25;      // G(u) <= ln(C0) + h1_norm_sq(u)/(16*pi)
constexpr double kFittedCdual = 0.042;  // dual norm of G' <= C * exp(h1/(8*pi))

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

double fd_bound(double reference, double tol) { return tol * (1.0 + std::abs(reference)); }

/// Mixed corpus for the inequality suites: band-limited fields swept over
/// amplitudes, plus the truncated-bubble family at both signs.
std::vector<MeanZeroField> inequality_corpus(const TorusGrid& grid, Rng& rng) {
  std::vector<MeanZeroField> corpus;
  const std::vector<double> targets{0.5, 2.0, 8.0, 16.0};
  for (int i = 0; i < 100; ++i) {
    corpus.push_back(
        random_direction(grid, rng, targets[i % targets.size()]));
  }
  const double r0 = 0.25;
  for (double eps = r0 / 2.0; eps >= 4.0 * grid.h() && eps > r0 / 16.0; eps /= 2.0) {
    const MeanZeroField u = build_u_eps(BumpSpec{{0.5, 0.5}, eps, r0}, grid);
    corpus.push_back(u);
    corpus.push_back(-1.0 * u);
  }
  return corpus;
}

/// Bubble radii usable on this grid: geometric ladder from r0/2 down to 4h,
/// ratio 1/sqrt(2) so even n = 128 yields >= 4 points.
std::vector<double> clipped_eps_list(const TorusGrid& grid, double r0) {
  std::vector<double> eps_list;
  for (double eps = r0 / 2.0; eps >= 4.0 * grid.h(); eps /= std::numbers::sqrt2) {
    eps_list.push_back(eps);
  }
  return eps_list;
}

// ---- suites --------------------------------------------------------------

void suite_quadrature(const TorusGrid& grid, const CheckConfig& cfg) {
  require(std::abs(integrate(Field(grid, 1.0)) - 1.0) <= 1e-14,
          "constant field must integrate to 1");
  const Field c1 = Field::sample(grid, [](double x, double) {
    return std::cos(2.0 * kPi * x);
  });
  require(std::abs(integrate(c1)) <= 1e-14, "cos(2*pi*x) must integrate to 0");
  const Field c2 = Field::sample(grid, [](double x, double) {
    const double c = std::cos(2.0 * kPi * x);
    return c * c;
  });
  require(std::abs(integrate(c2) - 0.5) <= 1e-14, "cos^2 must integrate to 1/2");

  Rng rng(cfg.seed + 101);
  const MeanZeroField u = random_band_limited(grid, rng);
  const MeanZeroField v = random_band_limited(grid, rng);
  const double lhs = integrate(axpy(u.field(), 2.0, v.field()));
  const double rhs = integrate(u) + 2.0 * integrate(v);
  require(std::abs(lhs - rhs) <= 1e-13, "integrate must be linear");
}

void suite_distance(const TorusGrid&, const CheckConfig& cfg) {
  require(torus_distance({0.1, 0.1}, {0.1, 0.1}) == 0.0, "identity distance");
  require(std::abs(torus_distance({0.05, 0.5}, {0.95, 0.5}) - 0.1) <= 1e-15,
          "wraparound distance (0.05,0.5)-(0.95,0.5) must be 0.1");
  require(std::abs(torus_distance({0.0, 0.0}, {0.5, 0.5}) - std::numbers::sqrt2 / 2.0) <= 1e-15,
          "antipodal distance must be sqrt(2)/2");

  Rng rng(cfg.seed + 102);
  for (int t = 0; t < 200; ++t) {
    const Point a{rng.uniform(), rng.uniform()};
    const Point b{rng.uniform(), rng.uniform()};
    const Point c{rng.uniform(), rng.uniform()};
    require(std::abs(torus_distance(a, b) - torus_distance(b, a)) <= 1e-15,
            "distance must be symmetric");
    require(torus_distance(a, c) <=
                torus_distance(a, b) + torus_distance(b, c) + 1e-12,
            "triangle inequality violated");
    require(torus_distance(a, b) <= std::numbers::sqrt2 / 2.0 + 1e-15,
            "distance exceeds the torus diameter");
  }
}

void suite_laplacian_roundtrip(const TorusGrid& grid, const CheckConfig& cfg) {
  const Field c1 = Field::sample(grid, [](double x, double) {
    return std::cos(2.0 * kPi * x);
  });
  const Field lap_c1 = minus_laplacian(c1);
  for (std::size_t i = 0; i < c1.values().size(); ++i) {
    require(std::abs(lap_c1.values()[i] - kFourPiSq * c1.values()[i]) <= 1e-9,
            "cos(2*pi*x) must be an eigenfunction with eigenvalue 4*pi^2");
  }
  const Field lap_const = minus_laplacian(Field(grid, 3.0));
  require(max_abs(lap_const) <= 1e-12, "constants must be harmonic");

  Rng rng(cfg.seed + 103);
  const MeanZeroField u = random_band_limited(grid, rng);
  const MeanZeroField round = inv_minus_laplacian(minus_laplacian(u));
  const double err = l2_norm(round.field() - u.field());
  require(err <= 1e-10 * (1.0 + l2_norm(u)),
          "inv_minus_laplacian(minus_laplacian(u)) must reproduce u");

  bool rejected = false;
  try {
    inv_minus_laplacian(Field(grid, 1.0));
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  require(rejected, "inverse Laplacian must reject the kernel direction");
}

void suite_eigenvalue(const TorusGrid& grid, const CheckConfig&) {
  const double mu1 = first_eigenvalue(grid);
  require(close_rel(mu1, kFourPiSq, 1e-10), "first eigenvalue must be 4*pi^2");
  require(first_eigenvalue(TorusGrid(16)) == mu1,
          "first eigenvalue must be resolution-independent");
  const EigenvalueCheck window = eigenvalue_window(grid);
  require(window.in_window, "mu1*|M| must lie strictly between 8*pi and 16*pi");
}

void suite_poincare(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 105);
  for (int t = 0; t < 100; ++t) {
    const MeanZeroField u = random_band_limited(grid, rng);
    detail::KahanSum sum;
    for (double v : u.values()) sum.add(v * v);
    const double l2sq = sum.value() * grid.h() * grid.h();
    require(h1_norm_sq(u) >= kFourPiSq * l2sq - 1e-8,
            "Poincare inequality violated");
  }
}

void suite_jensen(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 106);
  for (int t = 0; t < 100; ++t) {
    const MeanZeroField u = random_band_limited(grid, rng);
    require(eval_G(u) >= -1e-12, "G must be nonnegative on mean-zero fields");
  }
}

void suite_translation(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 107);
  for (int t = 0; t < 20; ++t) {
    const MeanZeroField u = random_band_limited(grid, rng);
    const double c = rng.uniform(-2.0, 2.0);
    const Field shifted = axpy(u.field(), c, Field(grid, 1.0));
    const double lhs = eval_G(shifted);
    const double rhs = eval_G(u) + c;
    require(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)),
            "G(u + c) must equal G(u) + c");
  }
}

void suite_convexity(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 108);
  const double h = 1e-2;
  for (int t = 0; t < 50; ++t) {
    const MeanZeroField u = random_band_limited(grid, rng);
    const MeanZeroField phi = random_direction(grid, rng, 1.0);
    const double gp = eval_G(axpy(u.field(), h, phi.field()));
    const double gm = eval_G(axpy(u.field(), -h, phi.field()));
    const double g0 = eval_G(u);
    require((gp - 2.0 * g0 + gm) / (h * h) >= -1e-8,
            "second difference of G must be nonnegative");
  }
}

void suite_symmetry(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 109);
  for (int t = 0; t < 20; ++t) {
    const MeanZeroField u = random_direction(grid, rng, rng.uniform(0.5, 4.0));
    const Params p(rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0));
    const Params swapped(p.lambda2, p.lambda1);
    const double a = eval_I(u, p).total;
    const double b = eval_I(-1.0 * u, swapped).total;
    require(close_rel(a, b, 1e-12), "I(u; l1, l2) must equal I(-u; l2, l1)");
  }
}

void suite_monotonicity(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 110);
  std::vector<MeanZeroField> samples;
  for (int t = 0; t < 20; ++t) {
    samples.push_back(random_direction(grid, rng, rng.uniform(0.5, 6.0)));
  }
  samples.push_back(build_u_eps(BumpSpec{{0.5, 0.5}, 0.0625, 0.25}, grid));
  for (const MeanZeroField& u : samples) {
    for (double bump : {0.1, 1.0}) {
      const Params p(rng.uniform(0.0, 40.0), rng.uniform(0.0, 40.0));
      const Params q(p.lambda1 + bump, p.lambda2 + bump);
      const double before = eval_I(u, p).total;
      const double after = eval_I(u, q).total;
      require(after <= before + 1e-12 * (1.0 + std::abs(before)),
              "I must be nonincreasing in the couplings");
    }
  }
}

void suite_gradient_consistency(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 111);
  const double h = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const Params p = (t % 2 == 0) ? Params(30.0, 5.0) : Params(5.0, 30.0);
    const MeanZeroField u = random_direction(grid, rng, 1.0);
    const MeanZeroField phi = random_direction(grid, rng, 1.0);
    MeanZeroField r = residual(u, p);
    if (cfg.mutate_residual_sign) r = -1.0 * r;

    detail::KahanSum sum;
    for (std::size_t i = 0; i < r.values().size(); ++i) {
      sum.add(r.values()[i] * phi.values()[i]);
    }
    const double pairing = sum.value() * grid.h() * grid.h();
    const double fd = (eval_I(axpy(u, h, phi), p).total -
                       eval_I(axpy(u, -h, phi), p).total) /
                      (2.0 * h);
    require(std::abs(fd - pairing) <= fd_bound(pairing, 1e-6),
            "residual must match the finite-difference derivative of I (fd=" +
                fmt(fd) + ", pairing=" + fmt(pairing) + ")");
  }
}

void suite_sobolev_descent(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 112);
  const Params p(30.0, 5.0);
  for (int t = 0; t < 10; ++t) {
    const MeanZeroField u = random_direction(grid, rng, rng.uniform(0.5, 2.0));
    const MeanZeroField g = sobolev_gradient(u, p);
    const double gsq = h1_norm_sq(g);
    if (gsq <= 1e-8) continue;
    const double step = 1e-4 / (1.0 + std::sqrt(gsq));
    require(eval_I(axpy(u, -step, g), p).total < eval_I(u, p).total,
            "small Sobolev-gradient steps must decrease I");
  }
  const MeanZeroField v = random_band_limited(grid, rng);
  const MeanZeroField back = sobolev_gradient(v, Params(0.0, 0.0));
  require(l2_norm(back.field() - v.field()) <= 1e-10 * (1.0 + l2_norm(v)),
          "with zero couplings the Sobolev gradient must reproduce u");
}

void suite_hessian(const TorusGrid& grid, const CheckConfig& cfg) {
  const MeanZeroField c1 = MeanZeroField(Field::sample(grid, [](double x, double) {
    return std::cos(2.0 * kPi * x);
  }));
  const double q35 = hess_at_zero_quadform(c1, Params(20.0, 15.0));
  require(close_rel(q35, 2.0 * kPi * kPi - 17.5, 1e-12),
          "quadratic form at 0 must match the closed form for cos(2*pi*x)");
  const double qcrit = hess_at_zero_quadform(c1, Params(kFourPiSq / 2.0, kFourPiSq / 2.0));
  require(std::abs(qcrit) <= 1e-10,
          "first eigenfunction must make the quadratic form vanish at lambda sum 4*pi^2");

  Rng rng(cfg.seed + 113);
  const Params p(30.0, 5.0);
  const double h = 1e-5;
  for (int t = 0; t < 5; ++t) {
    const MeanZeroField u = random_direction(grid, rng, 1.0);
    const MeanZeroField phi = random_direction(grid, rng, 1.0);
    const MeanZeroField psi = random_direction(grid, rng, 1.0);
    const MeanZeroField jphi = apply_hessian(u, p, phi);
    const MeanZeroField fd =
        (1.0 / (2.0 * h)) * (residual(axpy(u, h, phi), p) - residual(axpy(u, -h, phi), p));
    require(l2_norm(jphi.field() - fd.field()) <= 1e-5 * (1.0 + l2_norm(jphi)),
            "Hessian action must match finite differences of the residual");

    detail::KahanSum sab, sba;
    const MeanZeroField jpsi = apply_hessian(u, p, psi);
    for (std::size_t i = 0; i < jphi.values().size(); ++i) {
      sab.add(jphi.values()[i] * psi.values()[i]);
      sba.add(jpsi.values()[i] * phi.values()[i]);
    }
    const double ab = sab.value() * grid.h() * grid.h();
    const double ba = sba.value() * grid.h() * grid.h();
    require(std::abs(ab - ba) <= 1e-10 * (1.0 + std::abs(ab)),
            "Hessian must be symmetric");
  }
}

void suite_moser_trudinger(const TorusGrid& grid, const CheckConfig& cfg) {
  Rng rng(cfg.seed + 114);
  for (const MeanZeroField& u : inequality_corpus(grid, rng)) {
    const double margin = eval_G(u) - h1_norm_sq(u) / (16.0 * kPi);
    require(margin <= std::log(kFittedC0),
            "Moser-Trudinger shape violated: G - h1/(16*pi) = " + fmt(margin));
  }
}

void suite_dual_norm(const TorusGrid& grid, const CheckConfig& cfg) {
  const MeanZeroField zero{Field(grid, 0.0)};
  require(dual_norm_Gprime(zero) <= 1e-13, "G'(0) must vanish");

  Rng rng(cfg.seed + 115);
  for (const MeanZeroField& u : inequality_corpus(grid, rng)) {
    const double lhs = dual_norm_Gprime(u);
    const double rhs = kFittedCdual * std::exp(h1_norm_sq(u) / (8.0 * kPi));
    require(lhs <= rhs, "dual-norm bound violated: |G'| = " + fmt(lhs) +
                            " vs bound " + fmt(rhs));
  }
}

void suite_region(const TorusGrid& grid, const CheckConfig& cfg) {
  require(in_lambda(Params(30.0, 5.0), grid).in_region, "(30,5) must be admissible");
  require(!in_lambda(Params(10.0, 10.0), grid).in_region,
          "(10,10) must fail the max constraint");
  require(!in_lambda(Params(25.0, 20.0), grid).in_region,
          "(25,20) must fail the sum constraint");

  const double mu1 = first_eigenvalue(grid);
  for (const Params& vertex :
       {Params(8.0 * kPi, 0.0), Params(mu1, 0.0), Params(8.0 * kPi, mu1 - 8.0 * kPi)}) {
    require(!in_lambda(vertex, grid).in_region,
            "region vertices must be excluded (strict inequalities)");
  }

  Rng rng(cfg.seed + 116);
  for (int t = 0; t < 50; ++t) {
    const Params p(rng.uniform(0.0, 60.0), rng.uniform(0.0, 60.0));
    const Params swapped(p.lambda2, p.lambda1);
    require(in_lambda(p, grid).in_region == in_lambda(swapped, grid).in_region,
            "region membership must be symmetric in the couplings");
  }
}

void suite_blowup_arithmetic(const TorusGrid&, const CheckConfig&) {
  const double threshold = two_sided_threshold();
  const double closed = 4.0 * (3.0 + std::sqrt(5.0)) * kPi;
  require(std::abs(threshold - closed) <= 1e-12 * closed,
          "threshold must equal 4*(3+sqrt5)*pi");
  require(threshold > 16.0 * kPi && 16.0 * kPi > kFourPiSq,
          "ordering chain 4(3+sqrt5)pi > 16pi > 4pi^2 must hold");

  // Minimizer (x, y) = ((8+4*sqrt5)*pi, 4*pi): on the constraint curve with
  // the smaller coordinate at its lower bound.
  const double x = (8.0 + 4.0 * std::sqrt(5.0)) * kPi;
  const double y = 4.0 * kPi;
  require(std::abs((x - y) * (x - y) - 8.0 * kPi * (x + y)) <= 1e-8 * (x + y),
          "mass relation must hold at the minimizer");
  require(std::abs((x + y) - threshold) <= 1e-10 * threshold,
          "minimizer coordinates must sum to the threshold");
}

void suite_bubble_profile(const TorusGrid& grid, const CheckConfig&) {
  const double r0 = 0.25;
  const Point center{0.5, 0.5};
  const std::vector<double> eps_list = clipped_eps_list(grid, r0);
  require(eps_list.size() >= 4, "grid too coarse for the bubble ladder");

  const int ic = grid.n() / 2;
  const int jc = grid.n() / 2;
  // The gap between the peak node and the far plateau node (0, 0) is
  // projection-invariant (the subtracted mean cancels) and has the closed
  // form 4*ln(1/eps) + 2*ln(eps^2 + r0^2). Its O(1) part is trapped in
  // [2 ln r0^2, 2 ln(1.25 r0^2)] because eps <= r0/2: that bracket is the
  // precise meaning of "peak height 4*ln(1/eps) + O(1)".
  double prev_gap = -1e300;
  for (double eps : eps_list) {
    const MeanZeroField u = build_u_eps(BumpSpec{center, eps, r0}, grid);
    const double peak = u.field()(ic, jc);
    require(max_value(u) == peak, "bubble must peak at its center node");

    const double gap = peak - u.field()(0, 0);
    const double e2 = eps * eps;
    const double pred = 4.0 * std::log(1.0 / eps) + 2.0 * std::log(e2 + r0 * r0);
    require(std::abs(gap - pred) <= 1e-9 * (1.0 + std::abs(pred)),
            "peak-to-plateau gap off the profile: " + fmt(gap) + " vs " +
                fmt(pred));

    const double excess = gap - 4.0 * std::log(1.0 / eps);
    require(excess >= 2.0 * std::log(r0 * r0) - 1e-9 &&
                excess <= 2.0 * std::log(1.25 * r0 * r0) + 1e-9,
            "O(1) correction left its bracket: " + fmt(excess));

    require(gap > prev_gap, "peak gap must grow as eps shrinks");
    prev_gap = gap;

    // Radial symmetry: mirror nodes sit at the same distance, so the sampled
    // profile must agree there exactly.
    const int off = grid.n() / 16;
    const double a = u.field()(ic + off, jc);
    const double b = u.field()(ic - off, jc);
    const double c = u.field()(ic, jc + off);
    require(std::abs(a - b) <= 1e-12 && std::abs(a - c) <= 1e-12,
            "bubble must be radially symmetric on mirror nodes");
  }
}

// The bubble expansions hold as eps -> 0 with O(1) remainders, but any ladder
// a grid can resolve (eps in [4h, r0/2]) sits partly in the pre-asymptotic
// regime where those remainders still drift, so plain OLS slopes of single
// columns are window-dependent. This suite therefore asserts the substance in
// estimator forms that are robust at clipped windows: the leading-order
// cancellation in the Moser-Trudinger combination, and the sign of the energy
// growth at the most asymptotic gap of the ladder.
void suite_expansion_saturation(const TorusGrid& grid, const CheckConfig&) {
  const double r0 = 0.25;
  const std::vector<double> eps_list = clipped_eps_list(grid, r0);
  require(eps_list.size() >= 4, "grid too coarse for the bubble ladder");
  const ExpansionReport report =
      expansion_report({0.5, 0.5}, r0, eps_list, Params(30.0, 5.0), grid);

  // Saturation: ln int e^u grows like dirichlet/(16*pi), so their difference
  // must vary far less than either term does across the ladder.
  double combo_min = 1e300, combo_max = -1e300;
  double dir_min = 1e300, dir_max = -1e300;
  for (const ExpansionRow& row : report.rows) {
    const double combo = row.ln_int_exp_plus - row.dirichlet / (16.0 * kPi);
    combo_min = std::min(combo_min, combo);
    combo_max = std::max(combo_max, combo);
    dir_min = std::min(dir_min, row.dirichlet);
    dir_max = std::max(dir_max, row.dirichlet);
  }
  const double combo_spread = combo_max - combo_min;
  const double dir_spread = (dir_max - dir_min) / (16.0 * kPi);
  require(dir_spread > 1.0, "ladder must spread the Dirichlet energy");
  require(combo_spread <= 0.35 * dir_spread,
          "Moser-Trudinger combination must cancel the leading growth: spread " +
              fmt(combo_spread) + " vs component spread " + fmt(dir_spread));

  // Unboundedness sign at the most asymptotic gap: the I difference quotient
  // between the two smallest eps approximates 2*(8*pi - lambda1).
  const auto tail_quotient = [](const ExpansionReport& rep) {
    const std::size_t m = rep.rows.size();
    const ExpansionRow& a = rep.rows[m - 2];
    const ExpansionRow& b = rep.rows[m - 1];
    return (b.i_value - a.i_value) /
           (std::log(1.0 / b.eps) - std::log(1.0 / a.eps));
  };
  require(tail_quotient(report) < 0.0,
          "I must grow downward along the ladder for lambda1 > 8*pi");
  const ExpansionReport low =
      expansion_report({0.5, 0.5}, r0, eps_list, Params(20.0, 5.0), grid);
  require(tail_quotient(low) > 0.0,
          "I must grow upward along the ladder for lambda1 < 8*pi");

  // The minus-side mass never concentrates: its column stays O(1).
  require(std::abs(report.ln_exp_minus.slope) <= 0.15,
          "ln int e^{-u} must stay O(1): slope " + fmt(report.ln_exp_minus.slope));
}

}  // namespace

std::vector<CheckOutcome> run_check_suites(const TorusGrid& grid,
                                           const CheckConfig& cfg) {
  using SuiteFn = void (*)(const TorusGrid&, const CheckConfig&);
  const std::vector<std::pair<const char*, SuiteFn>> suites{
      {"quadrature", suite_quadrature},
      {"distance", suite_distance},
      {"laplacian_roundtrip", suite_laplacian_roundtrip},
      {"eigenvalue", suite_eigenvalue},
      {"poincare", suite_poincare},
      {"jensen", suite_jensen},
      {"translation", suite_translation},
      {"convexity", suite_convexity},
      {"symmetry", suite_symmetry},
      {"monotonicity", suite_monotonicity},
      {"gradient_consistency", suite_gradient_consistency},
      {"sobolev_descent", suite_sobolev_descent},
      {"hessian", suite_hessian},
      {"moser_trudinger", suite_moser_trudinger},
      {"dual_norm", suite_dual_norm},
      {"region", suite_region},
      {"blowup_arithmetic", suite_blowup_arithmetic},
      {"bubble_profile", suite_bubble_profile},
      {"expansion_saturation", suite_expansion_saturation},
  };

  std::vector<CheckOutcome> outcomes;
  outcomes.reserve(suites.size());
  for (const auto& [name, fn] : suites) {
    CheckOutcome outcome;
    outcome.suite = name;
    try {
      fn(grid, cfg);
      outcome.passed = true;
      outcome.detail = "ok";
    } catch (const Failure& failure) {
      outcome.passed = false;
      outcome.detail = failure.detail;
    } catch (const std::exception& err) {
      outcome.passed = false;
      outcome.detail = std::string("unexpected error: ") + err.what();
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

}  // namespace mf
