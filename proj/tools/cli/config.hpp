#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfe {

/// Raised for anything wrong with user-supplied configuration or input
/// files; the driver maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { expansions, solve, sweep, check };

const char* to_string(Command cmd) noexcept;

enum class OutputFormat { csv, json };

/// Flat key=value configuration shared by all subcommands. Defaults depend
/// on the subcommand only through grid_n (expansions wants n = 512 so the
/// default eps ladder stays resolvable; everything else runs at n = 128).
struct RunConfig {
  int grid_n = 128;
  double lambda1 = 30.0;
  double lambda2 = 5.0;
  double r0 = 0.25;
  std::vector<double> eps_list{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  int K = 24;
  int max_iters = 4000;
  double step0 = 1.0;
  double grad_tol = 1e-3;
  double band = 0.15;
  std::vector<double> seeds{1.0, 1.5, 2.0};
  double tol_residual = 1e-8;
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 42;
  int threads = 1;

  static RunConfig defaults_for(Command cmd);

  /// Range checks that don't need to build domain objects; grid/params
  /// constructors enforce their own invariants on top. Throws ConfigError.
  void validate() const;
};

/// Parses a flat key=value file ('#' starts a comment, blank lines ignored)
/// over the given defaults. Unknown or duplicate keys and malformed values
/// are ConfigErrors.
RunConfig load_config(const std::filesystem::path& path, RunConfig defaults);

/// Applies one key=value assignment (the same grammar as config lines).
void apply_assignment(RunConfig& config, const std::string& key,
                      const std::string& value);

/// Parses the sweep parameter file: CSV with header `lambda1,lambda2` and
/// one pair per row. Requires at least one data row.
std::vector<std::pair<double, double>> load_params_file(
    const std::filesystem::path& path);

}  // namespace mfe
