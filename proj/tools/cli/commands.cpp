#include "commands.hpp"

#include <iostream>

#include "mf/bumps.hpp"
#include "mf/checks.hpp"
#include "mf/diagnostics.hpp"
#include "mf/field.hpp"
#include "mf/functional.hpp"
#include "mf/grid.hpp"
#include "mf/minimax.hpp"
#include "mf/spectral.hpp"
#include "outputs.hpp"

namespace mfe {
namespace {

constexpr double kClassificationBallRadius = 0.1;

mf::MinimaxOptions options_from(const RunConfig& c) {
  mf::MinimaxOptions opts;
  opts.K = c.K;
  opts.max_iters = c.max_iters;
  opts.step0 = c.step0;
  opts.grad_tol = c.grad_tol;
  opts.band = c.band;
  opts.seeds = c.seeds;
  opts.r0 = c.r0;
  opts.validate();
  return opts;
}

}  // namespace

int cmd_expansions(const RunConfig& config) {
  const mf::TorusGrid grid(config.grid_n);
  const mf::Params p(config.lambda1, config.lambda2);
  RunRecorder rec(Command::expansions, config);
  const mf::ExpansionReport report = mf::expansion_report(
      {0.5, 0.5}, config.r0, config.eps_list, p, grid, config.threads);
  rec.stage("expansion_report", "ok");
  rec.emit("expansions.csv", render_expansions_csv(report));
  rec.emit("slopes.json", render_slopes_json(report));
  if (config.format == OutputFormat::json) {
    rec.emit("expansions.json", render_expansions_json(report));
  }
  rec.finish();
  return 0;
}

int cmd_solve(const RunConfig& config) {
  const mf::TorusGrid grid(config.grid_n);
  const mf::Params p(config.lambda1, config.lambda2);
  RunRecorder rec(Command::solve, config);

  const mf::RegionVerdict verdict = mf::in_lambda(p, grid);
  if (!verdict.in_region) {
    rec.stage("region", "outside");
    rec.finish();
    std::cerr << "mfe solve: (lambda1, lambda2) = (" << fmt(p.lambda1) << ", "
              << fmt(p.lambda2) << ") lies outside the admissible region\n";
    return 4;
  }
  rec.stage("region", "inside");

  const mf::MinimaxOptions opts = options_from(config);
  mf::MinimaxResult mm = mf::run_minimax(p, grid, opts);
  rec.stage("minimax", mm.converged ? "converged" : "stagnated");

  const mf::RefineResult refined =
      mf::refine_critical(mm.argmax, p, config.tol_residual);
  rec.stage("refine", refined.reached_tol ? "converged" : "missed tolerance");

  const mf::ConcentrationReport conc =
      mf::concentration_report(refined.u, p, kClassificationBallRadius);
  const mf::EnergyBreakdown energy = mf::eval_I(refined.u, p);

  SolveSummary summary;
  summary.c_est = mm.c_est;
  summary.residual = refined.residual_l2;
  summary.h1_norm = mf::h1_norm(refined.u);
  summary.i_value = energy.total;
  summary.classification = mf::to_string(conc.classification);
  summary.converged = mm.converged && refined.reached_tol;

  mf::save_field(rec.dir() / "solution.field", refined.u);
  rec.track("solution.field");
  rec.emit("history.csv", render_history_csv(mm.history));
  rec.emit("summary.json", render_summary_json(summary));
  if (config.format == OutputFormat::json) {
    rec.emit("history.json", render_history_json(mm.history));
  }
  rec.finish();

  if (!summary.converged) {
    std::cerr << "mfe solve: did not converge (minimax "
              << (mm.converged ? "converged" : "stagnated") << ", refinement "
              << (refined.reached_tol ? "reached" : "missed")
              << " tol_residual = " << fmt(config.tol_residual) << ")\n";
    return 5;
  }
  return 0;
}

int cmd_sweep(const RunConfig& config,
              const std::filesystem::path& params_path) {
  const auto pairs = load_params_file(params_path);
  const mf::TorusGrid grid(config.grid_n);
  std::vector<mf::Params> params;
  params.reserve(pairs.size());
  for (const auto& [l1, l2] : pairs) params.emplace_back(l1, l2);

  RunRecorder rec(Command::sweep, config);
  const mf::MinimaxOptions opts = options_from(config);
  const std::vector<mf::SweepRow> rows =
      mf::sweep(params, grid, opts, config.tol_residual, config.threads);
  rec.stage("sweep", "ok");
  rec.emit("sweep.csv", render_sweep_csv(rows));
  if (config.format == OutputFormat::json) {
    rec.emit("sweep.json", render_sweep_json(rows));
  }
  rec.finish();

  int unconverged = 0;
  for (const auto& r : rows) {
    if (!r.skipped && !r.converged) ++unconverged;
  }
  if (unconverged > 0) {
    std::cerr << "mfe sweep: " << unconverged
              << " in-region row(s) did not converge\n";
    return 5;
  }
  return 0;
}

int cmd_check(const RunConfig& config, bool mutate_residual_sign) {
  const mf::TorusGrid grid(config.grid_n);
  RunRecorder rec(Command::check, config);

  mf::CheckConfig cc;
  cc.seed = config.seed;
  cc.mutate_residual_sign = mutate_residual_sign;
  const std::vector<mf::CheckOutcome> outcomes = mf::run_check_suites(grid, cc);

  bool all_passed = true;
  for (const auto& o : outcomes) {
    if (o.passed) {
      std::cout << "PASS " << o.suite << "\n";
    } else {
      std::cout << "FAIL " << o.suite << ": " << o.detail << "\n";
      all_passed = false;
    }
    rec.stage(o.suite, o.passed ? "pass" : "fail");
  }
  std::cout.flush();

  rec.emit("check.csv", render_check_csv(outcomes));
  if (config.format == OutputFormat::json) {
    rec.emit("check.json", render_check_json(outcomes));
  }
  rec.finish();
  return all_passed ? 0 : 1;
}

}  // namespace mfe
