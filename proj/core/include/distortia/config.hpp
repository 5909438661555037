#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "distortia/enc_worstcase.hpp"

namespace distortia {

// Malformed or inconsistent experiment configuration; the CLI maps this to
// its dedicated exit code so scripted runs can tell bad input from a failed
// computation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThetaCurveConfig {
  int k_max = 5;
  ThetaGrid grid;
};

struct CaseStudyConfig {
  // One entry per plant case: the singular values of A (the plant is the
  // diagonal matrix of these values, which realizes them exactly).
  std::vector<std::vector<double>> singular_values = {
      {1.01, 1.0}, {1.5, 0.5}, {0.8, 0.9}};
  std::vector<double> sigma_diag = {2.0, 3.0};
  int t_max = 20;
  int bits = 3;
  double theta = 0.0;  // <= 0 means: pick by the window search
};

struct QuadrotorConfig {
  std::int64_t runs = 100000;
  double bin_width = 0.2;
  double sample_time = 0.5;
  int horizon = 10;
  double state_weight = 10.0;
  std::string mirror = "plane";  // "plane" flips the lateral axes; "point" everything
  std::uint64_t seed = 1;
};

struct RandomWalkConfig {
  int bound = 1;
  int t_max = 4;
};

struct BoundCheckConfig {
  int systems = 3;
  int horizon = 4;
  std::int64_t samples = 100000;
  std::uint64_t seed = 7;
  int state_dim = 2;
  int input_dim = 2;
  // When nonempty these (A, B) pairs replace the random plant draws.
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> explicit_systems;
};

using ExperimentConfig = std::variant<ThetaCurveConfig, CaseStudyConfig, QuadrotorConfig,
                                      RandomWalkConfig, BoundCheckConfig>;

// Reads a JSON config whose "experiment" field selects the schema:
// "theta-curve", "case-study", "quadrotor", "random-walk", or
// "verify-input-bound". Missing fields take the defaults above; unreadable
// files, unknown experiments, and out-of-range values raise ConfigError.
ExperimentConfig load_config(const std::string& path);

}  // namespace distortia
