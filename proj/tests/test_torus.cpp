#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mf/field.hpp"
#include "mf/grid.hpp"
#include "mf/spectral.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace mf;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

TEST_CASE("torus distance wraps around both axes") {
  CHECK(torus_distance({0.1, 0.1}, {0.9, 0.1}) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(torus_distance({0.1, 0.1}, {0.1, 0.9}) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(torus_distance({0.05, 0.05}, {0.95, 0.95}) ==
        doctest::Approx(std::sqrt(0.02)).epsilon(1e-14));
  CHECK(torus_distance({0.3, 0.7}, {0.3, 0.7}) == 0.0);
  // Symmetry and the diameter bound sqrt(2)/2.
  const Point a{0.12, 0.91}, b{0.77, 0.33};
  CHECK(torus_distance(a, b) == torus_distance(b, a));
  CHECK(torus_distance({0.0, 0.0}, {0.5, 0.5}) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("grid construction enforces even n >= 16") {
  CHECK_THROWS_AS(TorusGrid(15), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(17), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(0), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(-16), std::invalid_argument);
  const TorusGrid g(32);
  CHECK(g.n() == 32);
  CHECK(g.h() == doctest::Approx(1.0 / 32).epsilon(1e-16));
  CHECK(g.size() == 1024);
  CHECK(g.coord(8) == doctest::Approx(0.25).epsilon(1e-16));
  CHECK(g.node(4, 8).x == doctest::Approx(0.125).epsilon(1e-16));
  CHECK(g.node(4, 8).y == doctest::Approx(0.25).epsilon(1e-16));
}

TEST_CASE("field arithmetic and smoothness combination") {
  const TorusGrid g(16);
  Field a(g, 2.0);
  Field b(g, 3.0, Smoothness::kinked);
  CHECK(combine(Smoothness::smooth, Smoothness::smooth) == Smoothness::smooth);
  CHECK(combine(Smoothness::smooth, Smoothness::kinked) == Smoothness::kinked);
  CHECK(combine(Smoothness::kinked, Smoothness::kinked) == Smoothness::kinked);

  const Field sum = a + b;
  CHECK(sum(5, 7) == doctest::Approx(5.0).epsilon(1e-16));
  CHECK(sum.smoothness() == Smoothness::kinked);
  CHECK((a - b)(0, 0) == doctest::Approx(-1.0).epsilon(1e-16));
  CHECK((2.5 * a)(3, 3) == doctest::Approx(5.0).epsilon(1e-16));

  const Field c = axpy(a, -0.5, b);
  CHECK(c(1, 2) == doctest::Approx(0.5).epsilon(1e-16));
  CHECK(c.smoothness() == Smoothness::kinked);
}

TEST_CASE("quadrature is exact on constants and band-limited modes") {
  const TorusGrid g(64);
  CHECK(integrate(Field(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));

  const Field cosx = Field::sample(g, [](double x, double) { return std::cos(kTwoPi * x); });
  CHECK(std::abs(integrate(cosx)) < 1e-14);
  CHECK(std::abs(mean(cosx)) < 1e-14);

  // cos^2 is still below Nyquist at n = 64, so the trapezoid-on-torus rule
  // integrates it exactly: 1/2.
  const Field cos2 = Field::sample(g, [](double x, double) {
    const double c = std::cos(kTwoPi * x);
    return c * c;
  });
  CHECK(integrate(cos2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(l2_norm(cosx) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

  CHECK(max_value(cosx) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(min_value(cosx) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(max_abs(cosx) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mean-zero gate rejects biased fields and project repairs them") {
  const TorusGrid g(32);
  CHECK_THROWS_AS(MeanZeroField(Field(g, 0.25)), std::invalid_argument);

  const Field biased = Field::sample(g, [](double x, double y) {
    return 1.7 + std::cos(kTwoPi * x) + 0.3 * std::sin(kTwoPi * y);
  });
  const MeanZeroField projected = MeanZeroField::project(biased);
  CHECK(std::abs(mean(projected.field())) <= 1e-12 * (1.0 + max_abs(projected.field())));
  // Projection only shifts by a constant.
  const Field diff = biased - projected.field();
  CHECK(max_abs(diff - Field(g, mean(biased))) < 1e-12);

  // Arithmetic on mean-zero fields stays mean-zero.
  const MeanZeroField other = MeanZeroField::project(
      Field::sample(g, [](double x, double) { return std::sin(kTwoPi * x); }));
  const MeanZeroField combo = axpy(projected, 2.0, other);
  CHECK(std::abs(mean(combo.field())) <= 1e-11);
}

TEST_CASE("spectral laplacian matches the mode multiplier exactly") {
  const TorusGrid g(64);
  for (int k : {1, 3}) {
    const Field u = Field::sample(
        g, [k](double x, double) { return std::cos(kTwoPi * k * x); });
    const Field lap = minus_laplacian(u);
    const double factor = oracle::kFourPiSq * k * k;
    // Compare pointwise against the analytic eigenvalue action.
    double worst = 0.0;
    for (int i = 0; i < g.n(); ++i) {
      for (int j = 0; j < g.n(); ++j) {
        worst = std::max(worst, std::abs(lap(i, j) - factor * u(i, j)));
      }
    }
    CHECK(worst < 1e-10 * factor);
  }
}

TEST_CASE("poisson solve inverts the laplacian on mean-zero data") {
  const TorusGrid g(64);
  const Field f = Field::sample(g, [](double x, double y) {
    return std::cos(kTwoPi * x) + 0.5 * std::sin(2.0 * kTwoPi * y) -
           0.25 * std::cos(kTwoPi * (x + 3.0 * y));
  });
  const MeanZeroField w = inv_minus_laplacian(f);
  const Field back = minus_laplacian(w.field());
  CHECK(max_abs(back - f) < 1e-11);

  // And the other composition order, starting from a mean-zero field.
  const MeanZeroField u = MeanZeroField::project(f);
  const MeanZeroField again = inv_minus_laplacian(minus_laplacian(u.field()));
  CHECK(max_abs(again.field() - u.field()) < 1e-11);
}

TEST_CASE("half-inverse applied twice equals the full inverse") {
  const TorusGrid g(32);
  const Field f = Field::sample(g, [](double x, double y) {
    return std::sin(kTwoPi * x) - 0.4 * std::cos(2.0 * kTwoPi * (y - 0.3));
  });
  const Field half = inv_sqrt_minus_laplacian(f);
  const Field twice = inv_sqrt_minus_laplacian(half);
  const MeanZeroField full = inv_minus_laplacian(f);
  CHECK(max_abs(twice - full.field()) < 1e-12);
}

TEST_CASE("dirichlet energy: spectral path exact, difference path second order") {
  const Field u128 = Field::sample(TorusGrid(128), [](double x, double) {
    return std::cos(kTwoPi * x);
  });
  CHECK(h1_norm_sq(u128) == doctest::Approx(oracle::kTwoPiSq).epsilon(1e-12));
  CHECK(h1_norm(u128) == doctest::Approx(std::sqrt(oracle::kTwoPiSq)).epsilon(1e-12));

  // The same samples flagged kinked go through centered differences: the
  // error must shrink by ~4x when the grid is refined (second order).
  Field k128 = u128;
  k128.set_smoothness(Smoothness::kinked);
  Field k256 = Field::sample(TorusGrid(256), [](double x, double) {
    return std::cos(kTwoPi * x);
  });
  k256.set_smoothness(Smoothness::kinked);

  const double e128 = std::abs(h1_norm_sq(k128) - oracle::kTwoPiSq);
  const double e256 = std::abs(h1_norm_sq(k256) - oracle::kTwoPiSq);
  CHECK(e128 < 1e-2 * oracle::kTwoPiSq);
  CHECK(e128 / e256 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("first eigenvalue and its window") {
  const TorusGrid g(128);
  CHECK(first_eigenvalue(g) ==
        doctest::Approx(oracle::kFourPiSq).epsilon(1e-12));

  const EigenvalueCheck w = eigenvalue_window(g);
  CHECK(w.mu1 == doctest::Approx(oracle::kFourPiSq).epsilon(1e-12));
  CHECK(w.lower == doctest::Approx(oracle::kEightPi).epsilon(1e-14));
  CHECK(w.upper == doctest::Approx(2.0 * oracle::kEightPi).epsilon(1e-14));
  CHECK(w.in_window);
}

TEST_CASE("poincare inequality saturates on the ground mode") {
  const TorusGrid g(64);
  const Field ground = Field::sample(g, [](double x, double) {
    return std::cos(kTwoPi * x);
  });
  // Equality case: |grad|^2 integral = mu1 * L2^2 for the first mode.
  CHECK(h1_norm_sq(ground) ==
        doctest::Approx(oracle::kFourPiSq * 0.5).epsilon(1e-13));

  // Strict slack on a mixed field.
  const Field mixed = Field::sample(g, [](double x, double y) {
    return std::cos(kTwoPi * x) + 0.7 * std::sin(2.0 * kTwoPi * y);
  });
  const double lhs = h1_norm_sq(mixed);
  const double rhs = oracle::kFourPiSq * l2_norm(mixed) * l2_norm(mixed);
  CHECK(lhs >= rhs - 1e-10);
}

TEST_CASE("field files round-trip bit for bit") {
  const TorusGrid g(32);
  const Field u = Field::sample(g, [](double x, double y) {
    return std::exp(std::sin(kTwoPi * x)) - 1.234567890123456e-3 * y;
  });
  testsupport::TempDir dir("field-roundtrip");
  const auto path = dir.path() / "u.field";
  save_field(path, u);

  const Field v = load_field(path);
  REQUIRE(v.grid().n() == 32);
  CHECK(v.smoothness() == Smoothness::smooth);
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      CHECK(v(i, j) == u(i, j));  // 17 significant digits: exact round-trip
    }
  }

  const Field w = load_field(path, Smoothness::kinked);
  CHECK(w.smoothness() == Smoothness::kinked);

  CHECK_THROWS_AS(load_field(dir.path() / "missing.field"), std::runtime_error);
}
