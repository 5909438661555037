#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "distortia/config.hpp"
#include "distortia/csv.hpp"

using namespace distortia;

namespace {

std::string temp_path(const std::string& name) {
  return "/tmp/distortia_test_" + name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(csv_number(0.1) == "0.1");
  CHECK(csv_number(1.0) == "1");
  CHECK(csv_number(-2.5) == "-2.5");
  CHECK(csv_number(0.0) == "0");

  SUBCASE("parsing back loses almost nothing") {
    for (double v : {0.4477, 3.0976e-7, -123456.789, 0.9998, 5.039192, 1e12}) {
      const double back = std::stod(csv_number(v));
      CHECK(back == doctest::Approx(v).epsilon(1e-11));
    }
  }
}

TEST_CASE("config loading") {
  SUBCASE("each experiment parses into its own schema") {
    const std::string tc = temp_path("theta.json");
    write_file(tc, R"({"experiment":"theta-curve","k_max":3,"coarse":0.05})");
    auto cfg = load_config(tc);
    REQUIRE(std::holds_alternative<ThetaCurveConfig>(cfg));
    CHECK(std::get<ThetaCurveConfig>(cfg).k_max == 3);
    CHECK(std::get<ThetaCurveConfig>(cfg).grid.coarse == doctest::Approx(0.05));
    CHECK(std::get<ThetaCurveConfig>(cfg).grid.fine == doctest::Approx(0.001));

    const std::string cs = temp_path("case.json");
    write_file(cs, R"({"experiment":"case-study","singular_values":[[1.2,0.7]],)"
                   R"("sigma_diag":[1.0,2.0],"t_max":5,"bits":2,"theta":3.1})");
    cfg = load_config(cs);
    REQUIRE(std::holds_alternative<CaseStudyConfig>(cfg));
    const auto& case_cfg = std::get<CaseStudyConfig>(cfg);
    CHECK(case_cfg.singular_values.size() == 1);
    CHECK(case_cfg.singular_values[0][1] == doctest::Approx(0.7));
    CHECK(case_cfg.theta == doctest::Approx(3.1));

    const std::string qd = temp_path("quad.json");
    write_file(qd, R"({"experiment":"quadrotor","runs":500,"mirror":"point","seed":9})");
    cfg = load_config(qd);
    REQUIRE(std::holds_alternative<QuadrotorConfig>(cfg));
    CHECK(std::get<QuadrotorConfig>(cfg).runs == 500);
    CHECK(std::get<QuadrotorConfig>(cfg).mirror == "point");
    CHECK(std::get<QuadrotorConfig>(cfg).seed == 9);
    CHECK(std::get<QuadrotorConfig>(cfg).horizon == 10);

    const std::string rw = temp_path("walk.json");
    write_file(rw, R"({"experiment":"random-walk","bound":2,"t_max":3})");
    cfg = load_config(rw);
    REQUIRE(std::holds_alternative<RandomWalkConfig>(cfg));
    CHECK(std::get<RandomWalkConfig>(cfg).bound == 2);

    const std::string bc = temp_path("bound.json");
    write_file(bc, R"({"experiment":"verify-input-bound","systems":1,"samples":100,)"
                   R"("explicit_systems":[{"A":[[0.0,0.0],[0.0,0.0]],"B":[[1.0,0.0],[0.0,1.0]]}]})");
    cfg = load_config(bc);
    REQUIRE(std::holds_alternative<BoundCheckConfig>(cfg));
    const auto& bound_cfg = std::get<BoundCheckConfig>(cfg);
    CHECK(bound_cfg.samples == 100);
    REQUIRE(bound_cfg.explicit_systems.size() == 1);
    CHECK(bound_cfg.explicit_systems[0].second(1, 1) == doctest::Approx(1.0));
  }

  SUBCASE("bad inputs raise the dedicated error") {
    CHECK_THROWS_AS(load_config("/nonexistent/nope.json"), ConfigError);

    const std::string garbled = temp_path("garbled.json");
    write_file(garbled, "{not json");
    CHECK_THROWS_AS(load_config(garbled), ConfigError);

    const std::string unknown = temp_path("unknown.json");
    write_file(unknown, R"({"experiment":"frobnicate"})");
    CHECK_THROWS_AS(load_config(unknown), ConfigError);

    const std::string missing = temp_path("missing.json");
    write_file(missing, R"({"k_max":3})");
    CHECK_THROWS_AS(load_config(missing), ConfigError);

    const std::string range = temp_path("range.json");
    write_file(range, R"({"experiment":"random-walk","bound":3})");
    CHECK_THROWS_AS(load_config(range), ConfigError);

    const std::string mirror = temp_path("mirror.json");
    write_file(mirror, R"({"experiment":"quadrotor","mirror":"prism"})");
    CHECK_THROWS_AS(load_config(mirror), ConfigError);
  }
}

TEST_CASE("report serialization") {
  DistortionReport report({0.25, 0.75}, 0.5, 0.25, 0.6, 0.3);
  const std::string path = temp_path("report.csv");
  write_report_csv(path, report);
  auto lines = lines_of(read_file(path));
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "t,D_t");
  CHECK(lines[1] == "1,0.25");
  CHECK(lines[2] == "2,0.75");
  CHECK(lines[3] == "D_E,D_W,D_E_max,D_W_max");
  CHECK(lines[4] == "0.5,0.25,0.6,0.3");
}

TEST_CASE("trajectory serialization") {
  Trajectory traj;
  traj.states = {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)};
  traj.states[0] << 1.5, -2.0;
  traj.states[1] << 0.25, 0.0;
  traj.inputs = {Eigen::VectorXd::Zero(1)};
  traj.inputs[0] << 3.0;

  const std::string path = temp_path("traj.csv");
  write_trajectory_csv(path, traj);
  auto lines = lines_of(read_file(path));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "t,x1,x2,u1");
  CHECK(lines[1] == "1,1.5,-2,3");
  CHECK(lines[2] == "2,0.25,0,");  // the final state has no input
}

TEST_CASE("histogram table round trip") {
  EmpiricalTrajectoryDist hist(0.2, (Eigen::VectorXd(2) << 0.1, -0.4).finished(), 2);
  hist.record_key({0, 1, -2, 3}, 4);
  hist.record_key({-1, 0, 0, 0}, 1);
  hist.record_key({5, 5, 5, 5}, 2);

  const std::string path = temp_path("hist.txt");
  write_empirical_table(path, hist);
  EmpiricalTrajectoryDist back = read_empirical_table(path);

  CHECK(back.bin_width() == doctest::Approx(0.2));
  CHECK(back.origin()(1) == doctest::Approx(-0.4));
  CHECK(back.horizon() == 2);
  CHECK(back.total() == 7);
  REQUIRE(back.table().size() == 3);
  CHECK(back.table() == hist.table());

  SUBCASE("the table format is line based") {
    auto lines = lines_of(read_file(path));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("# bin_width=", 0) == 0);
    CHECK(lines[1] == "-1 0 0 0,1");
    CHECK(lines[2] == "0 1 -2 3,4");
    CHECK(lines[3] == "5 5 5 5,2");
  }
}

TEST_CASE("unwritable paths are reported") {
  std::vector<std::vector<double>> rows = {{1.0, 2.0}};
  CHECK_THROWS_AS(write_numeric_csv("/nonexistent_dir/x.csv", "a,b", rows),
                  std::runtime_error);
}
