#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "distortia/dist_model.hpp"
#include "distortia/enc_mirror.hpp"
#include "distortia/enc_worstcase.hpp"
#include "distortia/lin_sys.hpp"
#include "distortia/rng.hpp"

namespace distortia {

// Everything the eavesdropper knows after one transmission: the finitely
// many source trajectories the observed symbols could decode to, with their
// posterior probabilities. Candidates are stored stacked ([x_1; ...; x_T]).
struct AmbiguitySet {
  std::vector<Eigen::VectorXd> candidates;
  std::vector<double> weights;
  int horizon = 1;

  // Validates: nonempty, weights nonnegative and summing to 1 (1e-12),
  // candidates of one shared dimension divisible by the horizon.
  AmbiguitySet(std::vector<Eigen::VectorXd> candidates_in,
               std::vector<double> weights_in, int horizon_in);

  int size() const { return static_cast<int>(candidates.size()); }
  int state_dim() const {
    return static_cast<int>(candidates.front().size()) / horizon;
  }
  // State t of candidate i.
  Eigen::VectorXd state_at(int i, int t) const;
};

// Variance of a random variable taking value a with probability p_a and b
// otherwise: p_a (1 - p_a) (a - b)^2.
double bernoulli_var(double a, double b, double p_a);

// Posterior over the two decodes of a one-bit mirror transmission, weighted
// by the source density: f(z) / (f(z) + f(z~)) on the symbols as received,
// the complement on their mirror image. Zero-density candidates are dropped;
// if every candidate has density zero the symbols are impossible under the
// model and this throws.
AmbiguitySet posterior_1bit(const TrajectoryLaw& law, const EncodedTrajectory& z,
                            const std::vector<MirrorPlane>& planes);

// Same for the k-bit scheme: one candidate per key value, weights
// proportional to the source density of each decode. Decodes that coincide
// (e.g. keys that act identically on this particular z) are merged by
// summing their weights before any variance is taken.
AmbiguitySet posterior_kbit(const TrajectoryLaw& law, const EncodedTrajectory& z,
                            const MirrorScheme& scheme);

// Scalar shifting+mirroring posterior for one observed symbol. Outside the
// window the 2^k keys collapse onto the pair {z, -z} (half the keys each);
// inside it they fan out to 2^k distinct window points.
AmbiguitySet posterior_sm_scalar(const ScalarDensity& density, double z,
                                 const SMScheme& scheme);

// Posterior-weighted mean of the candidates' state at time t: the
// eavesdropper's optimal point estimate.
Eigen::VectorXd mmse_estimate(const AmbiguitySet& amb, int t);

// Expected squared estimation error at time t under the posterior; for two
// candidates this is bernoulli_var summed over coordinates.
double conditional_distortion(const AmbiguitySet& amb, int t);

// Mean of conditional_distortion over all time steps — the per-transmission
// quantity the average-distortion metric averages.
double average_conditional_distortion(const AmbiguitySet& amb);

// Closed-form average distortion of the one-bit mirror scheme, evaluated as
// the source expectation of f(z~)/(f + f~) times the squared mirror gap,
// through the law's deterministic integration backend (quadrature for
// continuous laws, exact sums for discrete ones). per_time returns the
// per-step distortions; the average is their mean.
std::vector<double> per_time_distortion_closed_1bit(
    const TrajectoryLaw& law, const std::vector<MirrorPlane>& planes);
double avg_distortion_closed_1bit(const TrajectoryLaw& law,
                                  const std::vector<MirrorPlane>& planes);

// Simplified evaluation (one quarter of the expected squared mirror gap)
// valid when the law is invariant under the mirrors; agrees with the general
// path whenever check_mirror_symmetry_condition certifies.
double avg_distortion_closed_1bit_symmetric(const TrajectoryLaw& law,
                                            const std::vector<MirrorPlane>& planes);

// Probes whether f(x) = f(mirror(x)) holds: exhaustively over atoms for
// discrete laws, over seeded sample probes plus the mean for continuous
// ones.
bool check_mirror_symmetry_condition(const TrajectoryLaw& law,
                                     const std::vector<MirrorPlane>& planes,
                                     double tol = 1e-6);

// Moment form of the symmetric-case average distortion:
// (1/T) sum_t [ tr(S_t R_t S_t') + |b_t - S_t mu_t|^2 ]. Exact arithmetic in
// the moments — no integration — so this is the reference path for laws
// whose symmetry is certified.
double avg_distortion_mirrorplane_closed(const TimeMoments& moments,
                                         const std::vector<MirrorPlane>& planes);

// Closed-form average distortion of the k-bit scheme: the expectation over
// source and key of the eavesdropper's conditional variance, evaluated
// through the law's integration backend.
std::vector<double> per_time_distortion_closed_kbit(const TrajectoryLaw& law,
                                                    const MirrorScheme& scheme);
double avg_distortion_closed_kbit(const TrajectoryLaw& law,
                                  const MirrorScheme& scheme);

// Simplified k-bit evaluation valid when all 2^k decodes of a point are
// equally likely under the law (check_kbit_symmetry_condition); must agree
// with the general path within integration tolerance when certified.
double avg_distortion_closed_kbit_symmetric(const TrajectoryLaw& law,
                                            const MirrorScheme& scheme);
bool check_kbit_symmetry_condition(const TrajectoryLaw& law,
                                   const MirrorScheme& scheme, double tol = 1e-6);

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
};

using TrajectoryEncoder =
    std::function<EncodedTrajectory(const StateSequence&, CounterRng&)>;
using TrajectoryPosterior = std::function<AmbiguitySet(const EncodedTrajectory&)>;

// Sampled estimate of the average distortion: draw a trajectory, encode it
// (the encoder draws its own key from the supplied stream), hand the symbols
// to the posterior, and average the conditional distortions. Uses decoupled
// counter streams (seed, 0) for trajectories and (seed, 1) for keys, so runs
// are reproducible and extendable.
MonteCarloResult avg_distortion_monte_carlo(const TrajectoryLaw& law,
                                            const TrajectoryEncoder& encode,
                                            const TrajectoryPosterior& posterior,
                                            std::int64_t num_samples,
                                            std::uint64_t seed);
MonteCarloResult avg_distortion_monte_carlo_1bit(const TrajectoryLaw& law,
                                                 const std::vector<MirrorPlane>& planes,
                                                 std::int64_t num_samples,
                                                 std::uint64_t seed);
MonteCarloResult avg_distortion_monte_carlo_kbit(const TrajectoryLaw& law,
                                                 const MirrorScheme& scheme,
                                                 std::int64_t num_samples,
                                                 std::uint64_t seed);

// Symbol grid for the scalar worst-case scan: uniform steps over
// [-theta - pad, theta + pad] plus points nudged boundary_eps inside each
// sub-window edge, where the minimum tends to sit.
struct ZGrid {
  double step = 0.002;
  double pad = 8.0;
  double boundary_eps = 1e-9;
};
std::vector<double> build_z_grid(const SMScheme& scheme, const ZGrid& grid = {});

struct WorstCase {
  double distortion = 0.0;
  double argmin_z = 0.0;
};

// Minimum over the symbol grid of the eavesdropper's conditional variance
// under the shifting+mirroring posterior; ties keep the smallest z. Grid
// points whose whole preimage set has zero density are skipped.
WorstCase worst_case_distortion(const SMScheme& scheme,
                                const std::vector<double>& z_grid,
                                const ScalarDensity& density = standard_normal_density());

// Same scan for any caller-supplied scalar ambiguity rule (e.g. plain
// mirroring, whose worst case slides to zero with the grid).
using ScalarAmbiguity = std::function<AmbiguitySet(double)>;
WorstCase worst_case_distortion(const ScalarAmbiguity& ambiguity_of,
                                const std::vector<double>& z_grid);

// Worst case for mirror schemes on discrete laws: exact minimum over every
// transmittable symbol sequence (all support atoms under all keys) and all
// time steps.
double worst_case_distortion_enumerated(const TrajectoryLaw& law,
                                        const MirrorScheme& scheme);

// How the eavesdropper's floor on the trajectory cipher evolves over time:
// `measured` is the grid minimum of tr((A^t)' A^t R) where R is the diagonal
// initial-symbol conditional covariance from the scalar worst-case
// evaluator (the trace splits per coordinate, so the joint minimum is the
// sum of per-coordinate minima); `bound` is c * tr(|L|^{2t} Sigma) with L
// the singular values of A in descending order paired with Sigma's diagonal
// in index order, and c the cipher's reported guarantee constant.
struct EvolutionPoint {
  int t = 0;
  double measured = 0.0;
  double bound = 0.0;
};
std::vector<EvolutionPoint> trajectory_distortion_evolution(
    const TrajectoryCipher& cipher, int t_max, const ZGrid& grid = {});

// No-observation ceilings: average and minimum over time of tr(R_t). No
// scheme can push the eavesdropper's distortion above these.
struct Baselines {
  double D_E_max = 0.0;
  double D_W_max = 0.0;
};
Baselines no_observation_baselines(const TimeMoments& moments);

// Evaluation summary with the ceilings attached. Construction enforces
// 0 <= D_E <= D_E_max (1 + 1e-9) and 0 <= D_W <= D_W_max (1 + 1e-9); a
// violation means an evaluator is broken, so it throws rather than carries
// the contradiction.
struct DistortionReport {
  std::vector<double> per_time;
  double D_E = 0.0;
  double D_W = 0.0;
  double D_E_max = 0.0;
  double D_W_max = 0.0;

  DistortionReport(std::vector<double> per_time_in, double D_E_in, double D_W_in,
                   double D_E_max_in, double D_W_max_in);
};

}  // namespace distortia
