#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"
#include "mf/rng.hpp"
#include "mf/spectral.hpp"
#include "support/oracles.hpp"

using namespace mf;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace {

MeanZeroField cos_mode(const TorusGrid& g, double amplitude) {
  return MeanZeroField::project(Field::sample(g, [amplitude](double x, double) {
    return amplitude * std::cos(kTwoPi * x);
  }));
}

double l2_pair(const Field& a, const Field& b) {
  Field prod = a;
  auto& vals = prod.values();
  const auto& bv = b.values();
  for (std::size_t t = 0; t < vals.size(); ++t) vals[t] *= bv[t];
  return integrate(prod);
}

}  // namespace

TEST_CASE("coupling constants are validated") {
  CHECK_NOTHROW(Params(0.0, 0.0));
  CHECK_NOTHROW(Params(30.0, 5.0));
  CHECK_THROWS_AS(Params(-1.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(Params(5.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(Params(std::nan(""), 5.0), std::invalid_argument);
  CHECK_THROWS_AS(Params(5.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("log-average of exp(cos) hits the Bessel oracle") {
  const TorusGrid g(128);
  // integral of e^{a cos(2 pi x)} over the torus = I0(a); quadrature on a
  // uniform grid converges spectrally for this analytic integrand.
  CHECK(eval_G(cos_mode(g, 1.0)) ==
        doctest::Approx(oracle::kLnBesselI0_1).epsilon(1e-12));
  CHECK(eval_G(cos_mode(g, 0.5)) ==
        doctest::Approx(oracle::kLnBesselI0_half).epsilon(1e-12));
  // Stability: a huge amplitude must not overflow (max-subtracted form).
  CHECK(std::isfinite(eval_G(cos_mode(g, 500.0))));
}

TEST_CASE("jensen lower bound on mean-zero fields") {
  const TorusGrid g(64);
  Rng rng(20260819);
  for (int i = 0; i < 25; ++i) {
    const MeanZeroField u = random_band_limited(g, rng);
    CHECK(eval_G(u) >= -1e-12);
    CHECK(eval_G(-1.0 * u) >= -1e-12);
  }
  CHECK(eval_G(MeanZeroField(Field(g, 0.0))) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("energy breakdown is internally consistent") {
  const TorusGrid g(64);
  Rng rng(7);
  const MeanZeroField u = random_band_limited(g, rng);
  const Params p(30.0, 5.0);
  const EnergyBreakdown e = eval_I(u, p);

  CHECK(e.dirichlet == doctest::Approx(0.5 * h1_norm_sq(u.field())).epsilon(1e-13));
  CHECK(e.g_plus == doctest::Approx(eval_G(u)).epsilon(1e-13));
  CHECK(e.g_minus == doctest::Approx(eval_G(-1.0 * u)).epsilon(1e-13));
  CHECK(e.total ==
        doctest::Approx(e.dirichlet - p.lambda1 * e.g_plus - p.lambda2 * e.g_minus)
            .epsilon(1e-12));
}

TEST_CASE("energy symmetry: negating u swaps the couplings") {
  const TorusGrid g(64);
  Rng rng(99);
  for (int i = 0; i < 10; ++i) {
    const MeanZeroField u = random_band_limited(g, rng);
    const double a = eval_I(u, Params(28.0, 3.0)).total;
    const double b = eval_I(-1.0 * u, Params(3.0, 28.0)).total;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("energy is monotone decreasing in each coupling") {
  const TorusGrid g(64);
  Rng rng(4242);
  for (int i = 0; i < 10; ++i) {
    const MeanZeroField u = random_band_limited(g, rng);
    const double base = eval_I(u, Params(20.0, 10.0)).total;
    CHECK(eval_I(u, Params(21.0, 10.0)).total <= base + 1e-12);
    CHECK(eval_I(u, Params(20.0, 11.0)).total <= base + 1e-12);
  }
}

TEST_CASE("normalized densities are probability densities") {
  const TorusGrid g(64);
  Rng rng(31337);
  const MeanZeroField u = random_band_limited(g, rng);
  for (int sign : {+1, -1}) {
    const Field rho = normalized_density(u.field(), sign);
    CHECK(integrate(rho) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(min_value(rho) > 0.0);
  }
  CHECK_THROWS_AS(normalized_density(u.field(), 0), std::invalid_argument);

  // Against a huge offset the density must stay finite (stable normalization).
  const MeanZeroField spike = cos_mode(g, 300.0);
  const Field rho = normalized_density(spike.field(), +1);
  CHECK(std::isfinite(max_value(rho)));
  CHECK(integrate(rho) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("residual matches directional derivatives of the energy") {
  const TorusGrid g(64);
  const Params p(30.0, 5.0);
  Rng rng(5150);
  const MeanZeroField u = random_band_limited(g, rng);
  const MeanZeroField r = residual(u, p);
  CHECK(std::abs(mean(r.field())) <= 1e-11);

  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const MeanZeroField phi = random_band_limited(g, rng);
    const double forward = eval_I(axpy(u, h, phi), p).total;
    const double backward = eval_I(axpy(u, -h, phi), p).total;
    const double fd = (forward - backward) / (2.0 * h);
    CHECK(fd == doctest::Approx(l2_pair(r.field(), phi.field())).epsilon(1e-6));
  }

  // The zero field is a critical point.
  const MeanZeroField zero(Field(g, 0.0));
  CHECK(residual_l2_norm(zero, p) <= 1e-13);
  CHECK(residual_l2_norm(u, p) ==
        doctest::Approx(l2_norm(residual(u, p).field())).epsilon(1e-13));
}

TEST_CASE("sobolev gradient is the riesz lift of the residual") {
  const TorusGrid g(64);
  const Params p(25.0, 10.0);
  Rng rng(8080);
  const MeanZeroField u = random_band_limited(g, rng);
  const MeanZeroField grad = sobolev_gradient(u, p);
  const Field lifted = minus_laplacian(grad.field());
  CHECK(max_abs(lifted - residual(u, p).field()) < 1e-9);
}

TEST_CASE("dual norm of the perturbation derivative hits its oracle") {
  const TorusGrid g(128);
  CHECK(dual_norm_Gprime(cos_mode(g, 1.0)) ==
        doctest::Approx(oracle::kDualNormCos).epsilon(1e-10));
}

TEST_CASE("second variation at zero reduces to the closed quadratic form") {
  const TorusGrid g(64);
  const Params p(30.0, 5.0);
  const MeanZeroField phi = cos_mode(g, 1.0);

  const double expected =
      oracle::kTwoPiSq - (p.lambda1 + p.lambda2) * 0.5;  // |cos|_{L2}^2 = 1/2
  CHECK(hess_at_zero_quadform(phi, p) == doctest::Approx(expected).epsilon(1e-12));

  // Against the operator form at u = 0: <J(0)phi, phi> = quadform(phi).
  const MeanZeroField zero(Field(g, 0.0));
  const MeanZeroField jphi = apply_hessian(zero, p, phi);
  CHECK(l2_pair(jphi.field(), phi.field()) ==
        doctest::Approx(expected).epsilon(1e-11));

  // Sign flips once the couplings cross the first eigenvalue sum bound.
  CHECK(hess_at_zero_quadform(phi, Params(30.0, 5.0)) > 0.0);
  CHECK(hess_at_zero_quadform(phi, Params(25.0, 20.0)) < 0.0);
}

TEST_CASE("hessian action matches finite differences of the residual") {
  const TorusGrid g(64);
  const Params p(30.0, 5.0);
  Rng rng(616);
  const MeanZeroField u = random_band_limited(g, rng);
  const MeanZeroField phi = random_band_limited(g, rng);

  const MeanZeroField jphi = apply_hessian(u, p, phi);
  CHECK(std::abs(mean(jphi.field())) <= 1e-11);

  const double t = 1e-5;
  const MeanZeroField rp = residual(axpy(u, t, phi), p);
  const MeanZeroField rm = residual(axpy(u, -t, phi), p);
  const Field fd = (1.0 / (2.0 * t)) * (rp.field() - rm.field());
  CHECK(l2_norm(fd - jphi.field()) <= 1e-5 * (1.0 + l2_norm(jphi.field())));
}

TEST_CASE("precomputed hessian operator agrees and is symmetric") {
  const TorusGrid g(64);
  const Params p(30.0, 5.0);
  Rng rng(2718);
  const MeanZeroField u = random_band_limited(g, rng);
  const HessianOperator hess(u, p);

  const MeanZeroField phi = random_band_limited(g, rng);
  const MeanZeroField psi = random_band_limited(g, rng);

  CHECK(max_abs(hess.apply(phi).field() - apply_hessian(u, p, phi).field()) <
        1e-12);

  const double lhs = l2_pair(hess.apply(phi).field(), psi.field());
  const double rhs = l2_pair(phi.field(), hess.apply(psi).field());
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
}
