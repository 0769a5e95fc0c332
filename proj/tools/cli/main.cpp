#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "mf/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

CommonFlags add_common(CLI::App* sub) {
  CommonFlags f;
  f.config_opt = sub->add_option("--config", f.config_path,
                                 "Path to a key = value config file")
                     ->check(CLI::ExistingFile);
  f.out_opt = sub->add_option("--out", f.out_dir,
                              "Output directory (overrides config output_dir)");
  f.seed_opt = sub->add_option(
      "--seed", f.seed, "Seed for randomized invariant suites (overrides config)");
  f.threads_opt = sub->add_option(
      "--threads", f.threads,
      "Worker threads for row-parallel stages (overrides config)");
  return f;
}

mfe::RunConfig resolve(mfe::Command cmd, const CommonFlags& f) {
  mfe::RunConfig config = mfe::RunConfig::defaults_for(cmd);
  if (f.config_opt->count() > 0) config = mfe::load_config(f.config_path, config);
  if (f.out_opt->count() > 0) config.output_dir = f.out_dir;
  if (f.seed_opt->count() > 0) config.seed = f.seed;
  if (f.threads_opt->count() > 0) config.threads = f.threads;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Mean field energy toolkit on the unit torus: bubble-family expansions, "
      "mountain-pass solves, parameter sweeps, and invariant checks"};
  app.set_version_flag("--version", std::string(mf::kVersion));
  app.require_subcommand(1);

  CLI::App* sub_expansions = app.add_subcommand(
      "expansions",
      "Evaluate the bubble-family energy columns and fit their slopes");
  const CommonFlags f_expansions = add_common(sub_expansions);

  CLI::App* sub_solve = app.add_subcommand(
      "solve", "Run the minimax over paths and refine to a critical point");
  const CommonFlags f_solve = add_common(sub_solve);

  CLI::App* sub_sweep = app.add_subcommand(
      "sweep", "Solve for every parameter pair in a params file");
  const CommonFlags f_sweep = add_common(sub_sweep);
  std::string params_path;
  sub_sweep->add_option("--params", params_path,
                        "CSV file with header lambda1,lambda2")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* sub_check =
      app.add_subcommand("check", "Run every invariant suite and report");
  const CommonFlags f_check = add_common(sub_check);
  bool mutate_residual_sign = false;
  sub_check
      ->add_flag("--mutate-residual-sign", mutate_residual_sign,
                 "Flip the residual sign inside the gradient suite (harness "
                 "self-test; the suite must then fail)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sub_expansions->parsed()) {
      return mfe::cmd_expansions(resolve(mfe::Command::expansions, f_expansions));
    }
    if (sub_solve->parsed()) {
      return mfe::cmd_solve(resolve(mfe::Command::solve, f_solve));
    }
    if (sub_sweep->parsed()) {
      return mfe::cmd_sweep(resolve(mfe::Command::sweep, f_sweep), params_path);
    }
    if (sub_check->parsed()) {
      return mfe::cmd_check(resolve(mfe::Command::check, f_check),
                            mutate_residual_sign);
    }
  } catch (const mfe::ConfigError& e) {
    std::cerr << "mfe: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mfe: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mfe: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
