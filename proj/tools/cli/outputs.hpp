#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "mf/bumps.hpp"
#include "mf/checks.hpp"
#include "mf/diagnostics.hpp"
#include "mf/minimax.hpp"

namespace mfe {

/// Renders a double with 17 significant digits (round-trip exact).
std::string fmt(double v);

/// Writes content to path atomically: temp file in the same directory, then
/// rename. Creates parent directories as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string render_expansions_csv(const mf::ExpansionReport& report);
std::string render_slopes_json(const mf::ExpansionReport& report);
std::string render_history_csv(const std::vector<mf::HistoryEntry>& history);
std::string render_sweep_csv(const std::vector<mf::SweepRow>& rows);
std::string render_check_csv(const std::vector<mf::CheckOutcome>& outcomes);

/// Everything summary.json reports about one solve.
struct SolveSummary {
  double c_est = 0.0;
  double residual = 0.0;
  double h1_norm = 0.0;
  double i_value = 0.0;
  std::string classification;
  bool converged = false;
};
std::string render_summary_json(const SolveSummary& s);

// JSON mirrors of the tabular outputs, written alongside the CSVs when the
// config asks for format = json.
std::string render_expansions_json(const mf::ExpansionReport& report);
std::string render_history_json(const std::vector<mf::HistoryEntry>& history);
std::string render_sweep_json(const std::vector<mf::SweepRow>& rows);
std::string render_check_json(const std::vector<mf::CheckOutcome>& outcomes);

/// Collects per-stage status and the set of output files during one command
/// run, then writes the run manifest. Every file routed through emit()/track()
/// must exist by the time finish() runs; finish() verifies that and writes
/// manifest.json last.
class RunRecorder {
 public:
  RunRecorder(Command command, const RunConfig& config);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  /// Records that a named stage finished with the given status.
  void stage(const std::string& name, const std::string& status);

  /// Atomically writes content to dir()/name and lists it in the manifest.
  void emit(const std::string& name, const std::string& content);

  /// Lists a file under dir() that was written by other means.
  void track(const std::string& name);

  /// Writes dir()/manifest.json. Call exactly once, after all outputs.
  void finish();

 private:
  Command command_;
  RunConfig config_;
  std::filesystem::path dir_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> stages_;
  std::vector<std::string> outputs_;
};

}  // namespace mfe
