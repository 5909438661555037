#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "distortia/adversary.hpp"
#include "distortia/dist_model.hpp"
#include "distortia/lin_sys.hpp"

namespace distortia {

// Per-time Monte-Carlo estimates of the cross-covariance trace that must be
// nonnegative for the input-to-state distortion translation to apply.
// estimates[t-1] covers state X_t; X_1 has no cross terms, so its entry is 0.
struct PhiEstimate {
  std::vector<double> estimates;
  std::vector<double> std_errors;
  bool holds = false;
};

// Estimates, for each t, the expectation over transmissions of
//   sum_{i<j<=t} tr( B' (A^{t-j})' A^{t-i} B R_{U_{i-1} U_{j-1} | Z} ),
// each unordered pair counted once, with states unrolled from X_0 = 0 as
// X_t = sum_{i<=t} A^{t-i} B U_{i-1}. The verdict `holds` allows three-sigma
// statistical slack: every estimate must sit above -3 std errors.
PhiEstimate phi_condition(const LinearSystem& sys, const TrajectoryLaw& input_law,
                          const TrajectoryEncoder& encode,
                          const TrajectoryPosterior& posterior,
                          std::int64_t num_samples, std::uint64_t seed);

// lambda_min(B'B) * D_U: the floor the input-side distortion puts under the
// state-side distortion whenever the cross-term condition holds.
double state_bound(double D_U, const Eigen::MatrixXd& B);

// Input-side measurement plus the applicability condition.
struct InputDistortionCert {
  double D_E_U = 0.0;
  double D_W_U = 0.0;
  double D_E_U_std_error = 0.0;
  double lambda_min = 0.0;
  bool condition_holds = false;
  PhiEstimate phi;
};

struct BoundReport {
  InputDistortionCert cert;
  double D_E_X = 0.0;
  double D_W_X = 0.0;
  double D_E_X_std_error = 0.0;
  double bound_E = 0.0;
  double bound_W = 0.0;
  bool certified = false;
  std::string diagnostics;
};

// End-to-end check of the translation: measures the eavesdropper's input-side
// distortions, maps the same posterior through the unrolled dynamics for the
// state-side ones, and compares against state_bound with 3-sigma slack. If
// the cross-term condition fails, the report refuses to certify and carries
// diagnostics instead of bounds.
BoundReport verify_bound_empirically(const LinearSystem& sys,
                                     const TrajectoryLaw& input_law,
                                     const TrajectoryEncoder& encode,
                                     const TrajectoryPosterior& posterior,
                                     std::int64_t num_samples, std::uint64_t seed);

}  // namespace distortia
