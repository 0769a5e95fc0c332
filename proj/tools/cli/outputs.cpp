#include "outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mf/version.hpp"

namespace mfe {
namespace {

using nlohmann::json;

/// CSV cell quoting: only the free-text columns (notes, failure details) can
/// contain delimiters, so everything else passes through untouched.
std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

const char* bool_word(bool b) { return b ? "true" : "false"; }

json config_echo(const RunConfig& c) {
  json j;
  j["grid_n"] = c.grid_n;
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["r0"] = c.r0;
  j["eps_list"] = c.eps_list;
  j["K"] = c.K;
  j["max_iters"] = c.max_iters;
  j["step0"] = c.step0;
  j["grad_tol"] = c.grad_tol;
  j["band"] = c.band;
  j["seeds"] = c.seeds;
  j["tol_residual"] = c.tol_residual;
  j["output_dir"] = c.output_dir;
  j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

json expansion_rows_json(const mf::ExpansionReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["eps"] = r.eps;
    row["ln_inv_eps"] = std::log(1.0 / r.eps);
    row["dirichlet"] = r.dirichlet;
    row["ln_exp_plus"] = r.ln_int_exp_plus;
    row["ln_exp_minus"] = r.ln_int_exp_minus;
    row["I_value"] = r.i_value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string render_expansions_csv(const mf::ExpansionReport& report) {
  std::ostringstream out;
  out << "eps,ln_inv_eps,dirichlet,ln_exp_plus,ln_exp_minus,I_value\n";
  for (const auto& r : report.rows) {
    out << fmt(r.eps) << ',' << fmt(std::log(1.0 / r.eps)) << ','
        << fmt(r.dirichlet) << ',' << fmt(r.ln_int_exp_plus) << ','
        << fmt(r.ln_int_exp_minus) << ',' << fmt(r.i_value) << '\n';
  }
  return out.str();
}

std::string render_slopes_json(const mf::ExpansionReport& report) {
  json j;
  j["slope_dirichlet"] = report.dirichlet.slope;
  j["slope_ln_exp_plus"] = report.ln_exp_plus.slope;
  j["slope_ln_exp_minus"] = report.ln_exp_minus.slope;
  j["slope_I_value"] = report.i_value.slope;
  j["intercept_dirichlet"] = report.dirichlet.intercept;
  j["intercept_ln_exp_plus"] = report.ln_exp_plus.intercept;
  j["intercept_ln_exp_minus"] = report.ln_exp_minus.intercept;
  j["intercept_I_value"] = report.i_value.intercept;
  j["max_residual_dirichlet"] = report.dirichlet.max_residual;
  j["max_residual_ln_exp_plus"] = report.ln_exp_plus.max_residual;
  j["max_residual_ln_exp_minus"] = report.ln_exp_minus.max_residual;
  j["max_residual_I_value"] = report.i_value.max_residual;
  return j.dump(2) + "\n";
}

std::string render_history_csv(const std::vector<mf::HistoryEntry>& history) {
  std::ostringstream out;
  out << "iter,max_energy,grad_norm\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    out << (i + 1) << ',' << fmt(history[i].max_energy) << ','
        << fmt(history[i].grad_norm) << '\n';
  }
  return out.str();
}

std::string render_sweep_csv(const std::vector<mf::SweepRow>& rows) {
  std::ostringstream out;
  out << "lambda1,lambda2,in_region,converged,c_est,residual,h1_norm,"
         "classification,note\n";
  for (const auto& r : rows) {
    out << fmt(r.p.lambda1) << ',' << fmt(r.p.lambda2) << ','
        << bool_word(r.verdict.in_region) << ',' << bool_word(r.converged)
        << ',' << fmt(r.c_est) << ',' << fmt(r.residual) << ','
        << fmt(r.h1_norm) << ',' << mf::to_string(r.classification) << ','
        << csv_quote(r.note) << '\n';
  }
  return out.str();
}

std::string render_check_csv(const std::vector<mf::CheckOutcome>& outcomes) {
  std::ostringstream out;
  out << "suite,passed,detail\n";
  for (const auto& o : outcomes) {
    out << o.suite << ',' << bool_word(o.passed) << ',' << csv_quote(o.detail)
        << '\n';
  }
  return out.str();
}

std::string render_summary_json(const SolveSummary& s) {
  json j;
  j["c_est"] = s.c_est;
  j["residual"] = s.residual;
  j["h1_norm"] = s.h1_norm;
  j["I_value"] = s.i_value;
  j["classification"] = s.classification;
  j["converged"] = s.converged;
  return j.dump(2) + "\n";
}

std::string render_expansions_json(const mf::ExpansionReport& report) {
  json j;
  j["rows"] = expansion_rows_json(report);
  return j.dump(2) + "\n";
}

std::string render_history_json(const std::vector<mf::HistoryEntry>& history) {
  json rows = json::array();
  for (std::size_t i = 0; i < history.size(); ++i) {
    json row;
    row["iter"] = i + 1;
    row["max_energy"] = history[i].max_energy;
    row["grad_norm"] = history[i].grad_norm;
    rows.push_back(row);
  }
  json j;
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string render_sweep_json(const std::vector<mf::SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row;
    row["lambda1"] = r.p.lambda1;
    row["lambda2"] = r.p.lambda2;
    row["in_region"] = r.verdict.in_region;
    row["converged"] = r.converged;
    row["c_est"] = r.c_est;
    row["residual"] = r.residual;
    row["h1_norm"] = r.h1_norm;
    row["classification"] = mf::to_string(r.classification);
    row["note"] = r.note;
    out.push_back(row);
  }
  json j;
  j["rows"] = out;
  return j.dump(2) + "\n";
}

std::string render_check_json(const std::vector<mf::CheckOutcome>& outcomes) {
  json out = json::array();
  for (const auto& o : outcomes) {
    json row;
    row["suite"] = o.suite;
    row["passed"] = o.passed;
    row["detail"] = o.detail;
    out.push_back(row);
  }
  json j;
  j["rows"] = out;
  return j.dump(2) + "\n";
}

RunRecorder::RunRecorder(Command command, const RunConfig& config)
    : command_(command),
      config_(config),
      dir_(config.output_dir),
      start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(dir_);
}

void RunRecorder::stage(const std::string& name, const std::string& status) {
  stages_.emplace_back(name, status);
}

void RunRecorder::emit(const std::string& name, const std::string& content) {
  atomic_write(dir_ / name, content);
  outputs_.push_back(name);
}

void RunRecorder::track(const std::string& name) { outputs_.push_back(name); }

void RunRecorder::finish() {
  for (const auto& name : outputs_) {
    if (!std::filesystem::exists(dir_ / name)) {
      throw std::logic_error("manifest lists missing output '" + name + "'");
    }
  }
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
  json stages = json::array();
  for (const auto& [name, status] : stages_) {
    json s;
    s["name"] = name;
    s["status"] = status;
    stages.push_back(s);
  }
  json j;
  j["artifact_version"] = mf::kVersion;
  j["command"] = to_string(command_);
  j["config"] = config_echo(config_);
  j["stages"] = stages;
  j["outputs"] = outputs_;
  j["wall_clock_seconds"] = elapsed;
  atomic_write(dir_ / "manifest.json", j.dump(2) + "\n");
}

}  // namespace mfe
