#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "distortia/lin_sys.hpp"
#include "distortia/rng.hpp"

namespace distortia {

// Point v such that the law satisfies f(x) = f(2v - x).
struct SymmetryPoint {
  Eigen::VectorXd point;
};

// Per-time first and second central moments of a trajectory law.
struct TimeMoments {
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;

  int horizon() const { return static_cast<int>(mean.size()); }
};

// Common view over the source laws the eavesdropper analysis integrates
// against. A trajectory of T states of dimension n is handled as the stacked
// vector [x_1; ...; x_T]. `density` is a pdf for continuous laws and a pmf
// for discrete ones; `integrate_over_support` is the matching Lebesgue
// integral (deterministic quadrature) or plain sum over atoms, so closed-form
// distortion expressions evaluate identically through either backend.
class TrajectoryLaw {
 public:
  virtual ~TrajectoryLaw() = default;

  virtual int horizon() const = 0;
  virtual int state_dim() const = 0;
  int stacked_dim() const { return horizon() * state_dim(); }

  virtual double density(const Eigen::VectorXd& stacked) const = 0;
  virtual double log_density(const Eigen::VectorXd& stacked) const;

  virtual double integrate_over_support(
      const std::function<double(const Eigen::VectorXd&)>& fn) const = 0;

  // Atoms of a discrete law; empty for continuous laws. Lets evaluators sum
  // over transmitted-symbol sets that reach outside the source support.
  virtual std::vector<Eigen::VectorXd> support_atoms() const { return {}; }

  virtual TimeMoments moments() const = 0;
  virtual Eigen::VectorXd mean() const = 0;
  virtual Eigen::VectorXd sample(CounterRng& rng) const = 0;
};

// Gaussian law over the stacked trajectory vector, possibly rank deficient.
// A zero-variance direction restricts the law to its affine support, where
// the density follows the pseudo-inverse convention: the quadratic form uses
// the pseudo-inverse, the normalizer multiplies only the positive
// eigenvalues, and points off the support have density zero.
class GaussianDist final : public TrajectoryLaw {
 public:
  GaussianDist(Eigen::VectorXd mu, Eigen::MatrixXd cov, int horizon = 1);

  int horizon() const override { return T_; }
  int state_dim() const override { return n_; }

  double density(const Eigen::VectorXd& stacked) const override;
  double log_density(const Eigen::VectorXd& stacked) const override;
  double integrate_over_support(
      const std::function<double(const Eigen::VectorXd&)>& fn) const override;
  TimeMoments moments() const override;
  Eigen::VectorXd mean() const override { return mu_; }
  Eigen::VectorXd sample(CounterRng& rng) const override;

  const Eigen::MatrixXd& cov() const { return cov_; }
  int rank() const { return rank_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd cov_;
  int T_ = 1;
  int n_ = 0;
  // Eigendecomposition split into the positive-variance range and its scale.
  Eigen::MatrixXd range_basis_;      // d x rank
  Eigen::VectorXd range_scales_;     // sqrt of positive eigenvalues
  int rank_ = 0;
  double log_norm_ = 0.0;            // log of the density normalizer
  double support_tol_ = 0.0;
};

// Bounded lattice random walk: X_1 uniform on the integers [-a, a], then
// X_t uniform on [-a, a] intersected with {X_{t-1}-1, X_{t-1}, X_{t-1}+1}.
// Small horizons admit exhaustive enumeration of every trajectory, which is
// what the exact-oracle comparisons lean on.
class RandomWalkDist final : public TrajectoryLaw {
 public:
  RandomWalkDist(int a, int horizon);

  int horizon() const override { return T_; }
  int state_dim() const override { return 1; }

  double density(const Eigen::VectorXd& stacked) const override;
  double integrate_over_support(
      const std::function<double(const Eigen::VectorXd&)>& fn) const override;
  std::vector<Eigen::VectorXd> support_atoms() const override;
  TimeMoments moments() const override;
  Eigen::VectorXd mean() const override;
  Eigen::VectorXd sample(CounterRng& rng) const override;

  int bound() const { return a_; }
  // Every trajectory in the support with its probability.
  const std::vector<std::pair<Eigen::VectorXd, double>>& enumerate() const;

  // Step pmf out of a given state (the conditional kernel).
  std::map<int, double> kernel(int state) const;
  std::map<int, double> initial_law() const;

 private:
  int a_ = 0;
  int T_ = 0;
  mutable std::vector<std::pair<Eigen::VectorXd, double>> support_;  // lazy
};

// Histogram over binned trajectories: each state is reduced to the selected
// coordinates, each coordinate to the bin index floor((x - origin) / width),
// and whole-trajectory keys are counted. Densities of keys never recorded
// are exactly zero. Bin keys are represented by their center points when a
// continuous value is needed.
class EmpiricalTrajectoryDist final : public TrajectoryLaw {
 public:
  using Key = std::vector<std::int32_t>;

  EmpiricalTrajectoryDist(double bin_width, Eigen::VectorXd origin, int horizon);

  int horizon() const override { return T_; }
  int state_dim() const override { return static_cast<int>(origin_.size()); }

  double density(const Eigen::VectorXd& stacked) const override;
  double integrate_over_support(
      const std::function<double(const Eigen::VectorXd&)>& fn) const override;
  std::vector<Eigen::VectorXd> support_atoms() const override;
  TimeMoments moments() const override;
  Eigen::VectorXd mean() const override;
  Eigen::VectorXd sample(CounterRng& rng) const override;

  void record(const Eigen::VectorXd& stacked);
  void record_key(Key key, std::uint64_t count);
  // Associative count merge so independently accumulated shards can be
  // combined; metadata must match exactly.
  void merge(const EmpiricalTrajectoryDist& other);

  Key key_of(const Eigen::VectorXd& stacked) const;
  Eigen::VectorXd center_of(const Key& key) const;

  double bin_width() const { return bin_width_; }
  const Eigen::VectorXd& origin() const { return origin_; }
  std::uint64_t total() const { return total_; }
  const std::map<Key, std::uint64_t>& table() const { return table_; }

 private:
  double bin_width_ = 1.0;
  Eigen::VectorXd origin_;
  int T_ = 1;
  std::map<Key, std::uint64_t> table_;
  std::uint64_t total_ = 0;
};

// Finite scalar Markov chain over integer states, the shape the symmetry
// audit works on.
struct FiniteMarkovChain {
  std::map<int, double> initial;
  std::function<std::map<int, double>(int)> kernel;
  int horizon = 1;
};

// Candidate symmetry point is always the mean; returns it only when the
// density verifiably satisfies f(x) = f(2v - x) on the probe set.
//  - Gaussian: deterministic quasi-random probes within 4 sigma of the mean,
//    relative tolerance `tol`. Holds for every (mu, cov).
//  - Random walk: exhaustive check over the full support.
//  - Empirical: per-key relative mismatch up to 3/sqrt(count) (sampling
//    noise); a histogram with fewer than two distinct keys is never
//    certified.
std::optional<SymmetryPoint> point_symmetry(const GaussianDist& dist, double tol = 1e-6);
std::optional<SymmetryPoint> point_symmetry(const RandomWalkDist& dist, double tol = 1e-6);
std::optional<SymmetryPoint> point_symmetry(const EmpiricalTrajectoryDist& dist,
                                            double tol = 1e-6);

// True iff the initial law is symmetric about its mean v and the kernel is
// reflection-equivariant about that same fixed point over every state
// reachable within the horizon: kernel(2v - s) must be the mirror image of
// kernel(s). Together these imply the joint trajectory law is symmetric
// about (v, ..., v); a drifting kernel fails even when each conditional is
// individually symmetric about some other point.
bool markov_symmetry_check(const FiniteMarkovChain& chain, double tol = 1e-9);
bool markov_symmetry_check(const RandomWalkDist& dist, double tol = 1e-9);

FiniteMarkovChain chain_of(const RandomWalkDist& dist);

// Where an affine map x -> M1 x + M2 sends a symmetry point; the pushforward
// of a symmetric law is symmetric about exactly this image.
SymmetryPoint affine_pushforward_symmetry(const SymmetryPoint& v,
                                          const Eigen::MatrixXd& M1,
                                          const Eigen::VectorXd& M2);

// Bins the selected state coordinates of each run and accumulates the
// whole-trajectory histogram. `coords` indexes into the state vector;
// `origin` must have one entry per selected coordinate.
EmpiricalTrajectoryDist empirical_from_runs(const std::vector<Trajectory>& runs,
                                            double bin_width,
                                            const Eigen::VectorXd& origin,
                                            const std::vector<int>& coords);

}  // namespace distortia
