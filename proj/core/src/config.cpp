#include "distortia/config.hpp"

#include <fstream>

#include "json.hpp"

namespace distortia {
namespace {

using nlohmann::json;

Eigen::MatrixXd to_matrix(const json& rows, const std::string& name) {
  if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
    throw ConfigError(name + " must be a nonempty array of rows");
  }
  const std::size_t cols = rows[0].size();
  Eigen::MatrixXd out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols) {
      throw ConfigError(name + " rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = rows[r][c].get<double>();
  }
  return out;
}

ThetaCurveConfig parse_theta_curve(const json& j) {
  ThetaCurveConfig cfg;
  cfg.k_max = j.value("k_max", cfg.k_max);
  cfg.grid.lo = j.value("theta_lo", cfg.grid.lo);
  cfg.grid.hi = j.value("theta_hi", cfg.grid.hi);
  cfg.grid.coarse = j.value("coarse", cfg.grid.coarse);
  cfg.grid.fine = j.value("fine", cfg.grid.fine);
  if (cfg.k_max < 1 || cfg.k_max > 8) throw ConfigError("k_max must be in [1, 8]");
  if (!(cfg.grid.lo >= 0.0) || !(cfg.grid.hi > cfg.grid.lo) || !(cfg.grid.coarse > 0.0) ||
      !(cfg.grid.fine > 0.0)) {
    throw ConfigError("theta grid must satisfy 0 <= lo < hi with positive steps");
  }
  return cfg;
}

CaseStudyConfig parse_case_study(const json& j) {
  CaseStudyConfig cfg;
  if (j.contains("singular_values")) {
    cfg.singular_values =
        j.at("singular_values").get<std::vector<std::vector<double>>>();
  }
  if (j.contains("sigma_diag")) {
    cfg.sigma_diag = j.at("sigma_diag").get<std::vector<double>>();
  }
  cfg.t_max = j.value("t_max", cfg.t_max);
  cfg.bits = j.value("bits", cfg.bits);
  cfg.theta = j.value("theta", cfg.theta);
  if (cfg.singular_values.empty()) throw ConfigError("need at least one plant case");
  for (const std::vector<double>& sv : cfg.singular_values) {
    if (sv.size() != cfg.sigma_diag.size()) {
      throw ConfigError("each case needs one singular value per state coordinate");
    }
    for (double v : sv) {
      if (!(v >= 0.0)) throw ConfigError("singular values must be nonnegative");
    }
  }
  for (double v : cfg.sigma_diag) {
    if (!(v > 0.0)) throw ConfigError("sigma_diag entries must be positive");
  }
  if (cfg.t_max < 0) throw ConfigError("t_max must be nonnegative");
  if (cfg.bits < 1 || cfg.bits > 8) throw ConfigError("bits must be in [1, 8]");
  return cfg;
}

QuadrotorConfig parse_quadrotor(const json& j) {
  QuadrotorConfig cfg;
  cfg.runs = j.value("runs", cfg.runs);
  cfg.bin_width = j.value("bin_width", cfg.bin_width);
  cfg.sample_time = j.value("sample_time", cfg.sample_time);
  cfg.horizon = j.value("horizon", cfg.horizon);
  cfg.state_weight = j.value("state_weight", cfg.state_weight);
  cfg.mirror = j.value("mirror", cfg.mirror);
  cfg.seed = j.value("seed", cfg.seed);
  if (cfg.runs < 1) throw ConfigError("runs must be at least 1");
  if (!(cfg.bin_width > 0.0)) throw ConfigError("bin_width must be positive");
  if (!(cfg.sample_time > 0.0)) throw ConfigError("sample_time must be positive");
  if (cfg.horizon < 2) throw ConfigError("horizon must be at least 2");
  if (!(cfg.state_weight > 0.0)) throw ConfigError("state_weight must be positive");
  if (cfg.mirror != "plane" && cfg.mirror != "point") {
    throw ConfigError("mirror must be \"plane\" or \"point\"");
  }
  return cfg;
}

RandomWalkConfig parse_random_walk(const json& j) {
  RandomWalkConfig cfg;
  cfg.bound = j.value("bound", cfg.bound);
  cfg.t_max = j.value("t_max", cfg.t_max);
  if (cfg.bound < 1 || cfg.bound > 2) throw ConfigError("bound must be 1 or 2");
  if (cfg.t_max < 1 || cfg.t_max > 6) throw ConfigError("t_max must be in [1, 6]");
  return cfg;
}

BoundCheckConfig parse_bound_check(const json& j) {
  BoundCheckConfig cfg;
  cfg.systems = j.value("systems", cfg.systems);
  cfg.horizon = j.value("horizon", cfg.horizon);
  cfg.samples = j.value("samples", cfg.samples);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.state_dim = j.value("state_dim", cfg.state_dim);
  cfg.input_dim = j.value("input_dim", cfg.input_dim);
  if (j.contains("explicit_systems")) {
    for (const json& entry : j.at("explicit_systems")) {
      Eigen::MatrixXd A = to_matrix(entry.at("A"), "explicit system A");
      Eigen::MatrixXd B = to_matrix(entry.at("B"), "explicit system B");
      if (A.rows() != A.cols()) throw ConfigError("explicit system A must be square");
      if (B.rows() != A.rows()) {
        throw ConfigError("explicit system B must have one row per state");
      }
      cfg.explicit_systems.emplace_back(std::move(A), std::move(B));
    }
  }
  if (cfg.systems < 1) throw ConfigError("systems must be at least 1");
  if (cfg.horizon < 1) throw ConfigError("horizon must be at least 1");
  if (cfg.samples < 2) throw ConfigError("samples must be at least 2");
  if (cfg.state_dim < 1 || cfg.input_dim < 1) {
    throw ConfigError("state_dim and input_dim must be at least 1");
  }
  return cfg;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    const std::string experiment = j.at("experiment").get<std::string>();
    if (experiment == "theta-curve") return parse_theta_curve(j);
    if (experiment == "case-study") return parse_case_study(j);
    if (experiment == "quadrotor") return parse_quadrotor(j);
    if (experiment == "random-walk") return parse_random_walk(j);
    if (experiment == "verify-input-bound") return parse_bound_check(j);
    throw ConfigError("unknown experiment: " + experiment);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

}  // namespace distortia
