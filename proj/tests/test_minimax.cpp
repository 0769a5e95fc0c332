#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"
#include "mf/minimax.hpp"
#include "mf/spectral.hpp"
#include "support/oracles.hpp"

using namespace mf;

namespace {

// Couplings used for the fast end-to-end runs: far enough above 8*pi that a
// negative-energy bubble is resolvable on a 64-point grid.
const Params kFast(35.0, 2.0);

MinimaxOptions fast_options() {
  MinimaxOptions opts;
  opts.K = 12;
  opts.max_iters = 2000;
  opts.grad_tol = 5e-3;
  opts.seeds = {1.0, 1.5};
  return opts;
}

}  // namespace

TEST_CASE("option validation") {
  MinimaxOptions opts;
  CHECK_NOTHROW(opts.validate());
  MinimaxOptions bad = opts;
  bad.K = 7;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = opts;
  bad.band = 0.6;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = opts;
  bad.band = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = opts;
  bad.step0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = opts;
  bad.grad_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = opts;
  bad.seeds.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = opts;
  bad.samples_per_segment = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = opts;
  bad.reparam_every = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("negative endpoint: sign, admissibility, and failure modes") {
  const TorusGrid g(64);

  const MeanZeroField up = find_negative_endpoint(kFast, g);
  CHECK(eval_I(up, kFast).total < 0.0);
  CHECK(h1_norm(up.field()) >= 1.0);
  // Dominant coupling on the plus side: the spike points up.
  CHECK(max_value(up.field()) > -min_value(up.field()));

  const Params swapped(2.0, 35.0);
  const MeanZeroField down = find_negative_endpoint(swapped, g);
  CHECK(eval_I(down, swapped).total < 0.0);
  // Negated bubble: the spike points down.
  CHECK(-min_value(down.field()) > max_value(down.field()));

  // Below the 8*pi threshold the scan must refuse outright.
  CHECK_THROWS_AS(find_negative_endpoint(Params(10.0, 10.0), g),
                  std::invalid_argument);

  // Above 8*pi but so close that no resolvable bubble goes negative: the
  // scan exhausts its ladder and reports the failure.
  CHECK_THROWS_AS(find_negative_endpoint(Params(25.2, 0.0), TorusGrid(16)),
                  std::runtime_error);
}

TEST_CASE("linear seed path: endpoints exact, interior interpolated") {
  const TorusGrid g(64);
  const MeanZeroField endpoint = find_negative_endpoint(kFast, g);
  const Path path = init_path(endpoint, 12);

  REQUIRE(path.K() == 12);
  REQUIRE(path.nodes.size() == 13);
  CHECK(max_abs(path.nodes.front().field()) == 0.0);
  CHECK(max_abs(path.nodes.back().field() - endpoint.field()) == 0.0);

  const Field expected = (5.0 / 12.0) * endpoint.field();
  CHECK(max_abs(path.nodes[5].field() - expected) < 1e-13);

  CHECK_THROWS_AS(init_path(endpoint, 7), std::invalid_argument);
}

TEST_CASE("sampled path maximum sees ridges hidden inside segments") {
  const TorusGrid g(64);
  const MeanZeroField endpoint = find_negative_endpoint(kFast, g);
  const Path path = init_path(endpoint, 12);

  std::vector<double> node_e;
  for (const auto& node : path.nodes) node_e.push_back(eval_I(node, kFast).total);

  const PathMaxEstimate est = sampled_path_max(path, node_e, kFast, 4);
  const double node_max = *std::max_element(node_e.begin(), node_e.end());
  // The sampled maximum dominates the node maximum by construction.
  CHECK(est.value >= node_max);
  CHECK(est.attack_node >= 1);
  CHECK(est.attack_node <= 11);

  // Brute-force the same quantity directly.
  double brute = node_e[0];
  for (int j = 0; j < path.K(); ++j) {
    for (int k = 1; k <= 4; ++k) {
      const double t = k / 5.0;
      const MeanZeroField point = axpy((1.0 - t) * path.nodes[j], t, path.nodes[j + 1]);
      brute = std::max(brute, eval_I(point, kFast).total);
    }
    brute = std::max(brute, node_e[j + 1]);
  }
  CHECK(est.value == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("one deformation sweep: endpoints pinned, maximum non-increasing") {
  const TorusGrid g(64);
  const MinimaxOptions opts = fast_options();
  const MeanZeroField endpoint = find_negative_endpoint(kFast, g);
  const Path path = init_path(endpoint, opts.K);

  std::vector<double> energies;
  for (const auto& node : path.nodes) energies.push_back(eval_I(node, kFast).total);
  const PathMaxEstimate before =
      sampled_path_max(path, energies, kFast, opts.samples_per_segment);

  bool stagnated = true;
  std::vector<double> cache = energies;
  const Path after = deform_step(path, kFast, opts, &stagnated, &cache);

  CHECK_FALSE(stagnated);
  CHECK(max_abs(after.nodes.front().field()) == 0.0);
  CHECK(max_abs(after.nodes.back().field() - endpoint.field()) == 0.0);

  std::vector<double> after_e;
  for (const auto& node : after.nodes) after_e.push_back(eval_I(node, kFast).total);
  // The cache matches a fresh evaluation.
  for (std::size_t j = 0; j < after_e.size(); ++j) {
    CHECK(cache[j] == doctest::Approx(after_e[j]).epsilon(1e-13));
  }
  const PathMaxEstimate now =
      sampled_path_max(after, after_e, kFast, opts.samples_per_segment);
  CHECK(now.value <= before.value + 1e-10 * (1.0 + std::abs(before.value)));
}

TEST_CASE("full minimax run reaches a positive interior mountain level") {
  const TorusGrid g(64);
  const MinimaxOptions opts = fast_options();
  const MinimaxResult res = run_minimax(kFast, g, opts);

  REQUIRE(res.converged);
  CHECK(res.c_est > 0.0);
  CHECK(res.c_est == res.history.back().max_energy);
  CHECK(h1_norm(res.argmax.field()) >= 0.1);
  CHECK_FALSE(res.attempts.empty());
  CHECK(res.attempts.front().endpoint_admissible);

  // Monotone history, and the final gradient under the threshold.
  for (std::size_t i = 1; i < res.history.size(); ++i) {
    CHECK(res.history[i].max_energy <=
          res.history[i - 1].max_energy + 1e-10 * (1.0 + std::abs(res.history[i - 1].max_energy)));
  }
  CHECK(res.history.back().grad_norm < opts.grad_tol);

  // The estimate dominates the energy at the first node crossing the 0.1
  // ball (the mountain level lower bound realized on the final path).
  for (const auto& node : res.path.nodes) {
    if (h1_norm(node.field()) >= 0.1) {
      CHECK(res.c_est >= eval_I(node, kFast).total - 1e-10);
      break;
    }
  }

  SUBCASE("refinement drives the candidate to a nontrivial critical point") {
    const RefineResult ref = refine_critical(res.argmax, kFast, 1e-8);
    REQUIRE(ref.reached_tol);
    CHECK(ref.residual_l2 <= 1e-8);
    CHECK(residual_l2_norm(ref.u, kFast) == doctest::Approx(ref.residual_l2).epsilon(1e-10));
    CHECK(h1_norm(ref.u.field()) >= 0.1);
    CHECK(eval_I(ref.u, kFast).total > 0.0);
    CHECK(std::abs(mean(ref.u.field())) <= 1e-11);

    // A critical point is a fixed point of further refinement.
    const RefineResult again = refine_critical(ref.u, kFast, 1e-8);
    CHECK(again.reached_tol);
    CHECK(max_abs(again.u.field() - ref.u.field()) == 0.0);
  }
}

TEST_CASE("refining the zero field returns it unchanged") {
  const TorusGrid g(64);
  const MeanZeroField zero(Field(g, 0.0));
  const RefineResult res = refine_critical(zero, kFast, 1e-8);
  CHECK(res.reached_tol);
  CHECK(res.residual_l2 <= 1e-12);
  CHECK(max_abs(res.u.field()) == 0.0);
  CHECK(res.descent_steps == 0);
  CHECK(res.newton_steps == 0);
}

TEST_CASE("minimax refuses out-of-region couplings") {
  const TorusGrid g(64);
  CHECK_THROWS_AS(run_minimax(Params(10.0, 10.0), g, fast_options()),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_minimax(Params(25.0, 20.0), g, fast_options()),
                  std::invalid_argument);
}

TEST_CASE("deterministic reruns produce identical histories") {
  const TorusGrid g(64);
  const MinimaxOptions opts = fast_options();
  const MinimaxResult a = run_minimax(kFast, g, opts);
  const MinimaxResult b = run_minimax(kFast, g, opts);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].max_energy == b.history[i].max_energy);
    CHECK(a.history[i].grad_norm == b.history[i].grad_norm);
  }
  CHECK(max_abs(a.argmax.field() - b.argmax.field()) == 0.0);
}
