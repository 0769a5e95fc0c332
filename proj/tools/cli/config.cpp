#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mfe {
namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || v.empty()) {
    throw ConfigError("config: key '" + key + "' needs a number, got '" + value + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  Int out = 0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || v.empty()) {
    throw ConfigError("config: key '" + key + "' needs an integer, got '" + value + "'");
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    out.push_back(parse_double(key, item));
  }
  if (out.empty()) {
    throw ConfigError("config: key '" + key + "' needs a comma-separated list");
  }
  return out;
}

}  // namespace

const char* to_string(Command cmd) noexcept {
  switch (cmd) {
    case Command::expansions: return "expansions";
    case Command::solve: return "solve";
    case Command::sweep: return "sweep";
    case Command::check: return "check";
  }
  return "unknown";
}

RunConfig RunConfig::defaults_for(Command cmd) {
  RunConfig config;
  if (cmd == Command::expansions) config.grid_n = 512;
  return config;
}

void RunConfig::validate() const {
  if (grid_n < 16 || grid_n % 2 != 0) {
    throw ConfigError("config: grid_n must be even and >= 16");
  }
  if (!(std::isfinite(lambda1) && lambda1 >= 0.0) ||
      !(std::isfinite(lambda2) && lambda2 >= 0.0)) {
    throw ConfigError("config: lambda1 and lambda2 must be finite and >= 0");
  }
  if (!(r0 > 0.0 && r0 < 0.5)) {
    throw ConfigError("config: r0 must lie in (0, 0.5)");
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("config: eps_list entries must be > 0");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw ConfigError("config: eps_list must be strictly decreasing");
    }
  }
  if (eps_list.empty()) throw ConfigError("config: eps_list must be nonempty");
  if (K < 8) throw ConfigError("config: K must be >= 8");
  if (max_iters < 1) throw ConfigError("config: max_iters must be >= 1");
  if (!(step0 > 0.0)) throw ConfigError("config: step0 must be > 0");
  if (!(grad_tol > 0.0)) throw ConfigError("config: grad_tol must be > 0");
  if (!(band > 0.0 && band <= 0.5)) throw ConfigError("config: band must lie in (0, 0.5]");
  if (seeds.empty()) throw ConfigError("config: seeds must be nonempty");
  for (double s : seeds) {
    if (!(s > 0.0)) throw ConfigError("config: seeds must be > 0");
  }
  if (!(tol_residual > 0.0)) throw ConfigError("config: tol_residual must be > 0");
  if (output_dir.empty()) throw ConfigError("config: output_dir must be nonempty");
  if (threads < 1) throw ConfigError("config: threads must be >= 1");
}

void apply_assignment(RunConfig& config, const std::string& key,
                      const std::string& value) {
  if (key == "grid_n") {
    config.grid_n = parse_int<int>(key, value);
  } else if (key == "lambda1") {
    config.lambda1 = parse_double(key, value);
  } else if (key == "lambda2") {
    config.lambda2 = parse_double(key, value);
  } else if (key == "r0") {
    config.r0 = parse_double(key, value);
  } else if (key == "eps_list") {
    config.eps_list = parse_list(key, value);
  } else if (key == "K") {
    config.K = parse_int<int>(key, value);
  } else if (key == "max_iters") {
    config.max_iters = parse_int<int>(key, value);
  } else if (key == "step0") {
    config.step0 = parse_double(key, value);
  } else if (key == "grad_tol") {
    config.grad_tol = parse_double(key, value);
  } else if (key == "band") {
    config.band = parse_double(key, value);
  } else if (key == "seeds") {
    config.seeds = parse_list(key, value);
  } else if (key == "tol_residual") {
    config.tol_residual = parse_double(key, value);
  } else if (key == "output_dir") {
    const std::string v = trim(value);
    if (v.empty()) throw ConfigError("config: output_dir must be nonempty");
    config.output_dir = v;
  } else if (key == "format") {
    const std::string v = trim(value);
    if (v == "csv") {
      config.format = OutputFormat::csv;
    } else if (v == "json") {
      config.format = OutputFormat::json;
    } else {
      throw ConfigError("config: format must be 'csv' or 'json', got '" + v + "'");
    }
  } else if (key == "seed") {
    config.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "threads") {
    config.threads = parse_int<int>(key, value);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path, RunConfig defaults) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("config: cannot open '" + path.string() + "'");
  }
  RunConfig config = defaults;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        " is not a key=value assignment");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config: line " + std::to_string(line_no) + " has an empty key");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config: duplicate key '" + key + "'");
    }
    apply_assignment(config, key, value);
  }
  config.validate();
  return config;
}

std::vector<std::pair<double, double>> load_params_file(
    const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("params: cannot open '" + path.string() + "'");
  }
  std::string line;
  bool header_seen = false;
  std::vector<std::pair<double, double>> rows;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (!header_seen) {
      if (stripped != "lambda1,lambda2") {
        throw ConfigError("params: header must be 'lambda1,lambda2', got '" +
                          stripped + "'");
      }
      header_seen = true;
      continue;
    }
    const std::size_t comma = stripped.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("params: line " + std::to_string(line_no) +
                        " needs two comma-separated values");
    }
    rows.emplace_back(parse_double("lambda1", stripped.substr(0, comma)),
                      parse_double("lambda2", stripped.substr(comma + 1)));
  }
  if (!header_seen) throw ConfigError("params: missing header 'lambda1,lambda2'");
  if (rows.empty()) throw ConfigError("params: no parameter rows");
  return rows;
}

}  // namespace mfe
