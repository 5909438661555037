#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>

#include "CLI11.hpp"

#include "distortia/config.hpp"
#include "distortia/csv.hpp"
#include "distortia/enc_worstcase.hpp"
#include "distortia/experiments.hpp"

namespace {

// Exit codes: 0 success, 2 bad invocation or config, 3 failed computation.
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

template <typename T>
const T& expect(const distortia::ExperimentConfig& config, const char* subcommand) {
  const T* cfg = std::get_if<T>(&config);
  if (cfg == nullptr) {
    throw distortia::ConfigError(
        std::string("config experiment does not match subcommand ") + subcommand);
  }
  return *cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distortion-based lightweight trajectory privacy toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;

  CLI::App* theta_curve =
      app.add_subcommand("theta-curve", "optimal window half-width per key width");
  CLI::App* case_study =
      app.add_subcommand("case-study", "trajectory-cipher distortion floor over time");
  CLI::App* quadrotor =
      app.add_subcommand("quadrotor", "empirical vehicle-run mirroring experiment");
  CLI::App* random_walk =
      app.add_subcommand("random-walk", "exact enumeration on the bounded walk");
  CLI::App* bound_check = app.add_subcommand(
      "verify-input-bound", "input-to-state distortion translation check");
  for (CLI::App* sub : {theta_curve, case_study, quadrotor, random_walk, bound_check}) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_path, "output CSV path")->required();
  }
  CLI::Option* quadrotor_seed =
      quadrotor->add_option("--seed", seed, "override the config seed");
  CLI::Option* bound_seed =
      bound_check->add_option("--seed", seed, "override the config seed");

  CLI::App* optimize =
      app.add_subcommand("optimize-theta", "single window search; row to stdout");
  int bits = 1;
  distortia::ThetaGrid grid;
  optimize->add_option("--k", bits, "key bits")->required();
  optimize->add_option("--coarse", grid.coarse, "coarse grid step");
  optimize->add_option("--fine", grid.fine, "refinement step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (optimize->parsed()) {
      const distortia::ThetaResult result = distortia::optimize_theta(bits, grid);
      std::printf("theta,dw\n%s,%s\n", distortia::csv_number(result.theta).c_str(),
                  distortia::csv_number(result.worst_case).c_str());
      return 0;
    }
    const distortia::ExperimentConfig config = distortia::load_config(config_path);
    if (theta_curve->parsed()) {
      distortia::write_theta_curve_csv(
          out_path, distortia::run_theta_curve(
                        expect<distortia::ThetaCurveConfig>(config, "theta-curve")));
    } else if (case_study->parsed()) {
      distortia::write_case_study_csv(
          out_path, distortia::run_case_study(
                        expect<distortia::CaseStudyConfig>(config, "case-study")));
    } else if (quadrotor->parsed()) {
      distortia::QuadrotorConfig cfg =
          expect<distortia::QuadrotorConfig>(config, "quadrotor");
      if (quadrotor_seed->count() > 0) cfg.seed = seed;
      distortia::write_quadrotor_csv(out_path, distortia::run_quadrotor(cfg));
    } else if (random_walk->parsed()) {
      distortia::write_random_walk_csv(
          out_path, distortia::run_random_walk(
                        expect<distortia::RandomWalkConfig>(config, "random-walk")));
    } else if (bound_check->parsed()) {
      distortia::BoundCheckConfig cfg =
          expect<distortia::BoundCheckConfig>(config, "verify-input-bound");
      if (bound_seed->count() > 0) cfg.seed = seed;
      distortia::write_bound_check_csv(out_path, distortia::run_bound_check(cfg));
    }
    return 0;
  } catch (const distortia::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
}
