#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "distortia/adversary.hpp"
#include "distortia/bounds.hpp"
#include "distortia/config.hpp"
#include "distortia/dist_model.hpp"
#include "distortia/lin_sys.hpp"

namespace distortia {

// Window search per key width: the optimal half-width and the floor it puts
// under the eavesdropper's conditional variance.
struct ThetaCurveRow {
  int k = 0;
  double theta_star = 0.0;
  double worst_case = 0.0;
};
std::vector<ThetaCurveRow> run_theta_curve(const ThetaCurveConfig& cfg);
void write_theta_curve_csv(const std::string& path,
                           const std::vector<ThetaCurveRow>& rows);

// Trajectory-cipher floor evolution for each configured plant case.
struct CaseStudyRow {
  int case_index = 0;
  int t = 0;
  double measured = 0.0;
  double bound = 0.0;
};
std::vector<CaseStudyRow> run_case_study(const CaseStudyConfig& cfg);
void write_case_study_csv(const std::string& path,
                          const std::vector<CaseStudyRow>& rows);

// Point-to-point vehicle runs binned into one spatial histogram per time
// step, then evaluated against the configured mirror. `ratio` is
// D_E / D_E_max; `distinct_keys` counts occupied histogram bins summed over
// the steps (the support size the closed-form evaluation sums over);
// `sample_run` is the first rollout, kept for the trajectory dump.
struct QuadrotorResult {
  DistortionReport report;
  double ratio = 0.0;
  std::int64_t distinct_keys = 0;
  Trajectory sample_run;
};
QuadrotorResult run_quadrotor(const QuadrotorConfig& cfg);
// Summary CSV (D_E, D_E_max, ratio, distinct_keys); the sample run goes to
// `path` + ".run0.csv".
void write_quadrotor_csv(const std::string& path, const QuadrotorResult& result);

// Exhaustive walk enumeration per horizon; throws if the mirrored walk's
// average distortion does not meet the no-observation ceiling exactly
// (within 1e-12 relative), since for this symmetric law it must.
struct RandomWalkRow {
  int horizon = 0;
  double D_E = 0.0;
  double D_E_max = 0.0;
};
std::vector<RandomWalkRow> run_random_walk(const RandomWalkConfig& cfg);
void write_random_walk_csv(const std::string& path,
                           const std::vector<RandomWalkRow>& rows);

// Input-to-state distortion translation on randomized (or explicitly
// supplied) plants. Random plants are redrawn until the cross-term condition
// holds, so every returned report is for an applicable system.
struct BoundCheckCase {
  int system = 0;
  BoundReport report;
};
std::vector<BoundCheckCase> run_bound_check(const BoundCheckConfig& cfg);
void write_bound_check_csv(const std::string& path,
                           const std::vector<BoundCheckCase>& cases);

}  // namespace distortia
