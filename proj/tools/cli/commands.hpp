#pragma once

#include <filesystem>

#include "config.hpp"

namespace mfe {

// Each command returns the process exit code:
//   0 success, 1 check failure, 2 config/input error, 3 numerical failure,
//   4 parameters outside the admissible region, 5 non-convergence.
// Config and numerical errors surface as exceptions (ConfigError /
// std::invalid_argument / std::runtime_error) for the caller to map.

int cmd_expansions(const RunConfig& config);
int cmd_solve(const RunConfig& config);
int cmd_sweep(const RunConfig& config, const std::filesystem::path& params_path);
int cmd_check(const RunConfig& config, bool mutate_residual_sign);

}  // namespace mfe
