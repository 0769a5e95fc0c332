#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mf/bumps.hpp"
#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"
#include "support/oracles.hpp"

using namespace mf;

namespace {

// Closed-form Dirichlet integral of the truncated logarithmic cap on the
// plane (the torus correction is exponentially small for r0 <= 0.25):
//   16*pi * [ ln(1 + r0^2/eps^2) + eps^2/(eps^2 + r0^2) - 1 ].
double cap_dirichlet(double eps, double r0) {
  const double e2 = eps * eps, q = r0 * r0 / e2;
  return 16.0 * std::numbers::pi *
         (std::log1p(q) + 1.0 / (1.0 + q) - 1.0);
}

}  // namespace

TEST_CASE("bubble parameters are validated against the grid") {
  const TorusGrid g(128);
  CHECK_NOTHROW(validate(BumpSpec{{0.5, 0.5}, 0.0625, 0.25}, g));
  // eps above half the cap radius: profile no longer ball-dominated.
  CHECK_THROWS_AS(validate(BumpSpec{{0.5, 0.5}, 0.13, 0.25}, g), std::invalid_argument);
  // eps below the resolvability floor 4h = 0.03125.
  CHECK_THROWS_AS(validate(BumpSpec{{0.5, 0.5}, 0.03, 0.25}, g), std::invalid_argument);
  // cap radius must stay below the half-cell bound.
  CHECK_THROWS_AS(validate(BumpSpec{{0.5, 0.5}, 0.1, 0.5}, g), std::invalid_argument);
  CHECK_THROWS_AS(validate(BumpSpec{{0.5, 0.5}, 0.1, -0.1}, g), std::invalid_argument);
}

TEST_CASE("bubble field shape: peak, plateau, symmetry, mean") {
  const TorusGrid g(128);
  const double eps = 0.0625, r0 = 0.25;
  const MeanZeroField u = build_u_eps(BumpSpec{{0.5, 0.5}, eps, r0}, g);

  CHECK_FALSE(u.field().smooth());  // truncation kinks the gradient
  CHECK(std::abs(mean(u.field())) <= 1e-12 * (1.0 + max_abs(u.field())));

  const int c = 64;  // node at (0.5, 0.5)
  CHECK(u.field()(c, c) == max_value(u.field()));

  // Mirror symmetry through the center, both axes.
  for (int d : {3, 11, 25}) {
    CHECK(u.field()(c + d, c) == doctest::Approx(u.field()(c - d, c)).epsilon(1e-14));
    CHECK(u.field()(c, c + d) == doctest::Approx(u.field()(c, c - d)).epsilon(1e-14));
    CHECK(u.field()(c + d, c + d) == doctest::Approx(u.field()(c - d, c - d)).epsilon(1e-14));
  }

  // Outside the cap the profile is one constant.
  const double far1 = u.field()(0, 0);
  const double far2 = u.field()(0, 64);
  const double far3 = u.field()(10, 5);
  CHECK(far2 == doctest::Approx(far1).epsilon(1e-14));
  CHECK(far3 == doctest::Approx(far1).epsilon(1e-14));

  // Projection-invariant peak-to-plateau gap: 4 ln(1/eps) + 2 ln(eps^2+r0^2).
  const double gap = u.field()(c, c) - far1;
  const double predicted =
      4.0 * std::log(1.0 / eps) + 2.0 * std::log(eps * eps + r0 * r0);
  CHECK(gap == doctest::Approx(predicted).epsilon(1e-12));
}

TEST_CASE("line fit recovers exact affine data and rejects bad input") {
  const std::vector<double> xs{0.0, 1.0, 2.0, 3.5};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * x - 2.0);
  const LineFit fit = fit_line(xs, ys);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(fit.max_residual <= 1e-12);

  CHECK_THROWS_AS(fit_line({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_line({1.0, 2.0}, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("expansion rows: identities, ordering, and the dirichlet law") {
  const TorusGrid g(256);
  const Params p(30.0, 5.0);
  const std::vector<double> eps_list{0.125, 0.0625, 0.03125, 0.015625};
  const ExpansionReport rep = expansion_report({0.5, 0.5}, 0.25, eps_list, p, g);

  REQUIRE(rep.rows.size() == eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    CHECK(rep.rows[i].eps == eps_list[i]);  // decreasing order preserved
    // Row-level energy identity.
    const ExpansionRow& r = rep.rows[i];
    CHECK(r.i_value ==
          doctest::Approx(0.5 * r.dirichlet - p.lambda1 * r.ln_int_exp_plus -
                          p.lambda2 * r.ln_int_exp_minus)
              .epsilon(1e-10));
    // Discrete Dirichlet integral against the closed planar form.
    CHECK(r.dirichlet ==
          doctest::Approx(cap_dirichlet(r.eps, 0.25)).epsilon(0.02));
  }

  // The local slope of the Dirichlet column at the deep end approaches the
  // 32*pi law (the plateau corrections decay like eps^2/r0^2).
  const std::size_t last = rep.rows.size() - 1;
  const double local_slope =
      (rep.rows[last].dirichlet - rep.rows[last - 1].dirichlet) / std::log(2.0);
  CHECK(local_slope == doctest::Approx(oracle::kThirtyTwoPi).epsilon(0.06));

  // ln of the negative-side mass stays bounded: near-zero slope.
  CHECK(std::abs(rep.ln_exp_minus.slope) <= 0.2);
}

TEST_CASE("expansion report rejects malformed ladders") {
  const TorusGrid g(128);
  const Params p(30.0, 5.0);
  CHECK_THROWS_AS(
      expansion_report({0.5, 0.5}, 0.25, {0.125, 0.0625, 0.03125}, p, g),
      std::invalid_argument);  // fewer than 4 points
  CHECK_THROWS_AS(
      expansion_report({0.5, 0.5}, 0.25, {0.0625, 0.125, 0.05, 0.04}, p, g),
      std::invalid_argument);  // not strictly decreasing
}

TEST_CASE("row-parallel evaluation is bit-identical to sequential") {
  const TorusGrid g(128);
  const Params p(30.0, 5.0);
  const std::vector<double> eps_list{0.125, 0.09, 0.0625, 0.04, 0.03125};
  const ExpansionReport seq = expansion_report({0.5, 0.5}, 0.25, eps_list, p, g, 1);
  const ExpansionReport par = expansion_report({0.5, 0.5}, 0.25, eps_list, p, g, 3);

  REQUIRE(par.rows.size() == seq.rows.size());
  for (std::size_t i = 0; i < seq.rows.size(); ++i) {
    CHECK(par.rows[i].dirichlet == seq.rows[i].dirichlet);
    CHECK(par.rows[i].ln_int_exp_plus == seq.rows[i].ln_int_exp_plus);
    CHECK(par.rows[i].ln_int_exp_minus == seq.rows[i].ln_int_exp_minus);
    CHECK(par.rows[i].i_value == seq.rows[i].i_value);
  }
  CHECK(par.dirichlet.slope == seq.dirichlet.slope);
  CHECK(par.i_value.intercept == seq.i_value.intercept);
}
