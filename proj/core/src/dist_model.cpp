#include "distortia/dist_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace distortia {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Quadrature over the whitened box [-8, 8]^r per the numeric contract:
// 801 trapezoid nodes per scalar dimension. The tensor grid is only viable
// in low dimension; three dimensions fall back to a coarser 201-node rule
// and anything higher is rejected in favor of Monte-Carlo.
int quadrature_nodes_for(int rank) {
  if (rank <= 2) return 801;
  if (rank == 3) return 201;
  throw std::runtime_error(
      "deterministic quadrature supports at most 3 effective dimensions (got " +
      std::to_string(rank) + "); use the Monte-Carlo evaluator instead");
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

double TrajectoryLaw::log_density(const Eigen::VectorXd& stacked) const {
  return std::log(density(stacked));
}

// ---------------------------------------------------------------------------
// GaussianDist

GaussianDist::GaussianDist(Eigen::VectorXd mu, Eigen::MatrixXd cov, int horizon)
    : mu_(std::move(mu)), cov_(std::move(cov)), T_(horizon) {
  const int d = static_cast<int>(mu_.size());
  if (T_ < 1) throw std::invalid_argument("horizon must be at least 1");
  if (d % T_ != 0) {
    throw std::invalid_argument("stacked dimension must be divisible by the horizon");
  }
  n_ = d / T_;
  if (cov_.rows() != d || cov_.cols() != d) {
    throw std::invalid_argument("covariance must match the stacked dimension");
  }
  if (!cov_.isApprox(cov_.transpose(), 1e-10)) {
    throw std::invalid_argument("covariance must be symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("covariance eigendecomposition failed");
  }
  const Eigen::VectorXd evals = es.eigenvalues();
  const double max_eval = std::max(0.0, evals.maxCoeff());
  const double cutoff = 1e-12 * std::max(1.0, max_eval);
  if (evals.minCoeff() < -cutoff) {
    throw std::invalid_argument("covariance must be positive semidefinite");
  }

  std::vector<int> keep;
  for (int i = 0; i < d; ++i) {
    if (evals(i) > cutoff) keep.push_back(i);
  }
  rank_ = static_cast<int>(keep.size());
  range_basis_.resize(d, rank_);
  range_scales_.resize(rank_);
  log_norm_ = 0.5 * rank_ * kLog2Pi;
  for (int j = 0; j < rank_; ++j) {
    range_basis_.col(j) = es.eigenvectors().col(keep[j]);
    range_scales_(j) = std::sqrt(evals(keep[j]));
    log_norm_ += std::log(range_scales_(j));
  }
  support_tol_ = 1e-8 * std::max(1.0, std::sqrt(max_eval));
}

double GaussianDist::log_density(const Eigen::VectorXd& stacked) const {
  if (stacked.size() != mu_.size()) {
    throw std::invalid_argument("density query dimension mismatch");
  }
  const Eigen::VectorXd resid = stacked - mu_;
  const Eigen::VectorXd coords = range_basis_.transpose() * resid;
  if (rank_ < mu_.size()) {
    const double off = (resid - range_basis_ * coords).norm();
    if (off > support_tol_) return -std::numeric_limits<double>::infinity();
  }
  const double quad = (coords.array() / range_scales_.array()).square().sum();
  return -0.5 * quad - log_norm_;
}

double GaussianDist::density(const Eigen::VectorXd& stacked) const {
  return std::exp(log_density(stacked));
}

double GaussianDist::integrate_over_support(
    const std::function<double(const Eigen::VectorXd&)>& fn) const {
  if (rank_ == 0) return fn(mu_);  // point mass: the support is one atom

  const int nodes = quadrature_nodes_for(rank_);
  const double lo = -8.0, hi = 8.0;
  const double step = (hi - lo) / (nodes - 1);
  double volume = 1.0;  // r-dimensional volume scale of u -> mu + basis*(s.*u)
  for (int j = 0; j < rank_; ++j) volume *= range_scales_(j);

  std::int64_t total = 1;
  for (int j = 0; j < rank_; ++j) total *= nodes;

  Eigen::VectorXd u(rank_);
  double acc = 0.0;
  for (std::int64_t lin = 0; lin < total; ++lin) {
    std::int64_t rem = lin;
    double w = 1.0;
    for (int j = 0; j < rank_; ++j) {
      const int idx = static_cast<int>(rem % nodes);
      rem /= nodes;
      u(j) = lo + idx * step;
      w *= (idx == 0 || idx == nodes - 1) ? 0.5 * step : step;
    }
    const Eigen::VectorXd x =
        mu_ + range_basis_ * (range_scales_.array() * u.array()).matrix();
    acc += w * fn(x);
  }
  return volume * acc;
}

TimeMoments GaussianDist::moments() const {
  TimeMoments m;
  m.mean.reserve(T_);
  m.cov.reserve(T_);
  for (int t = 0; t < T_; ++t) {
    m.mean.push_back(mu_.segment(t * n_, n_));
    m.cov.push_back(cov_.block(t * n_, t * n_, n_, n_));
  }
  return m;
}

Eigen::VectorXd GaussianDist::sample(CounterRng& rng) const {
  Eigen::VectorXd z(rank_);
  for (int j = 0; j < rank_; ++j) z(j) = rng.normal();
  return mu_ + range_basis_ * (range_scales_.array() * z.array()).matrix();
}

// ---------------------------------------------------------------------------
// RandomWalkDist

RandomWalkDist::RandomWalkDist(int a, int horizon) : a_(a), T_(horizon) {
  if (a < 0) throw std::invalid_argument("walk bound must be nonnegative");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
}

std::map<int, double> RandomWalkDist::initial_law() const {
  std::map<int, double> pmf;
  const double p = 1.0 / (2 * a_ + 1);
  for (int s = -a_; s <= a_; ++s) pmf[s] = p;
  return pmf;
}

std::map<int, double> RandomWalkDist::kernel(int state) const {
  std::map<int, double> pmf;
  std::vector<int> moves;
  for (int d = -1; d <= 1; ++d) {
    const int next = state + d;
    if (next >= -a_ && next <= a_) moves.push_back(next);
  }
  const double p = 1.0 / static_cast<double>(moves.size());
  for (int next : moves) pmf[next] = p;
  return pmf;
}

const std::vector<std::pair<Eigen::VectorXd, double>>& RandomWalkDist::enumerate() const {
  if (!support_.empty()) return support_;
  const double count_estimate = (2.0 * a_ + 1.0) * std::pow(3.0, T_ - 1);
  if (count_estimate > 2e6) {
    throw std::runtime_error("random walk support too large to enumerate exhaustively");
  }

  std::vector<int> path;
  std::function<void(double)> extend = [&](double prob) {
    if (static_cast<int>(path.size()) == T_) {
      Eigen::VectorXd x(T_);
      for (int t = 0; t < T_; ++t) x(t) = path[t];
      support_.emplace_back(std::move(x), prob);
      return;
    }
    if (path.empty()) {
      for (const auto& [s, p] : initial_law()) {
        path.push_back(s);
        extend(prob * p);
        path.pop_back();
      }
    } else {
      for (const auto& [s, p] : kernel(path.back())) {
        path.push_back(s);
        extend(prob * p);
        path.pop_back();
      }
    }
  };
  extend(1.0);
  return support_;
}

double RandomWalkDist::density(const Eigen::VectorXd& stacked) const {
  if (stacked.size() != T_) {
    throw std::invalid_argument("density query dimension mismatch");
  }
  std::vector<int> path(T_);
  for (int t = 0; t < T_; ++t) {
    const double r = std::round(stacked(t));
    if (std::abs(stacked(t) - r) > 1e-9) return 0.0;  // off the lattice
    path[t] = static_cast<int>(r);
  }
  if (path[0] < -a_ || path[0] > a_) return 0.0;
  double prob = 1.0 / (2 * a_ + 1);
  for (int t = 1; t < T_; ++t) {
    const auto pmf = kernel(path[t - 1]);
    const auto it = pmf.find(path[t]);
    if (it == pmf.end()) return 0.0;
    prob *= it->second;
  }
  return prob;
}

double RandomWalkDist::integrate_over_support(
    const std::function<double(const Eigen::VectorXd&)>& fn) const {
  double acc = 0.0;
  for (const auto& [x, p] : enumerate()) acc += fn(x);
  return acc;
}

std::vector<Eigen::VectorXd> RandomWalkDist::support_atoms() const {
  std::vector<Eigen::VectorXd> atoms;
  atoms.reserve(enumerate().size());
  for (const auto& [x, p] : enumerate()) atoms.push_back(x);
  return atoms;
}

TimeMoments RandomWalkDist::moments() const {
  TimeMoments m;
  m.mean.assign(T_, Eigen::VectorXd::Zero(1));
  m.cov.assign(T_, Eigen::MatrixXd::Zero(1, 1));
  for (const auto& [x, p] : enumerate()) {
    for (int t = 0; t < T_; ++t) m.mean[t](0) += p * x(t);
  }
  for (const auto& [x, p] : enumerate()) {
    for (int t = 0; t < T_; ++t) {
      const double c = x(t) - m.mean[t](0);
      m.cov[t](0, 0) += p * c * c;
    }
  }
  return m;
}

Eigen::VectorXd RandomWalkDist::mean() const {
  const TimeMoments m = moments();
  Eigen::VectorXd mu(T_);
  for (int t = 0; t < T_; ++t) mu(t) = m.mean[t](0);
  return mu;
}

Eigen::VectorXd RandomWalkDist::sample(CounterRng& rng) const {
  Eigen::VectorXd x(T_);
  int state = static_cast<int>(rng.uniform_index(2 * a_ + 1)) - a_;
  x(0) = state;
  for (int t = 1; t < T_; ++t) {
    const auto pmf = kernel(state);
    std::vector<int> moves;
    for (const auto& [s, p] : pmf) moves.push_back(s);
    state = moves[rng.uniform_index(moves.size())];
    x(t) = state;
  }
  return x;
}

// ---------------------------------------------------------------------------
// EmpiricalTrajectoryDist

EmpiricalTrajectoryDist::EmpiricalTrajectoryDist(double bin_width,
                                                 Eigen::VectorXd origin,
                                                 int horizon)
    : bin_width_(bin_width), origin_(std::move(origin)), T_(horizon) {
  if (bin_width_ <= 0.0) throw std::invalid_argument("bin width must be positive");
  if (origin_.size() == 0) throw std::invalid_argument("origin must be nonempty");
  if (T_ < 1) throw std::invalid_argument("horizon must be at least 1");
}

EmpiricalTrajectoryDist::Key EmpiricalTrajectoryDist::key_of(
    const Eigen::VectorXd& stacked) const {
  const int d = state_dim();
  if (stacked.size() != static_cast<Eigen::Index>(d) * T_) {
    throw std::invalid_argument("trajectory key dimension mismatch");
  }
  Key key(static_cast<std::size_t>(d) * T_);
  for (int t = 0; t < T_; ++t) {
    for (int i = 0; i < d; ++i) {
      const double v = (stacked(t * d + i) - origin_(i)) / bin_width_;
      key[t * d + i] = static_cast<std::int32_t>(std::floor(v));
    }
  }
  return key;
}

Eigen::VectorXd EmpiricalTrajectoryDist::center_of(const Key& key) const {
  const int d = state_dim();
  if (key.size() != static_cast<std::size_t>(d) * T_) {
    throw std::invalid_argument("key length mismatch");
  }
  Eigen::VectorXd x(static_cast<Eigen::Index>(d) * T_);
  for (int t = 0; t < T_; ++t) {
    for (int i = 0; i < d; ++i) {
      x(t * d + i) = origin_(i) + (key[t * d + i] + 0.5) * bin_width_;
    }
  }
  return x;
}

void EmpiricalTrajectoryDist::record(const Eigen::VectorXd& stacked) {
  record_key(key_of(stacked), 1);
}

void EmpiricalTrajectoryDist::record_key(Key key, std::uint64_t count) {
  if (key.size() != static_cast<std::size_t>(state_dim()) * T_) {
    throw std::invalid_argument("key length mismatch");
  }
  table_[std::move(key)] += count;
  total_ += count;
}

void EmpiricalTrajectoryDist::merge(const EmpiricalTrajectoryDist& other) {
  if (other.bin_width_ != bin_width_ || other.T_ != T_ ||
      other.origin_.size() != origin_.size() || other.origin_ != origin_) {
    throw std::invalid_argument("cannot merge histograms with different binning");
  }
  for (const auto& [key, count] : other.table_) {
    table_[key] += count;
  }
  total_ += other.total_;
}

double EmpiricalTrajectoryDist::density(const Eigen::VectorXd& stacked) const {
  if (total_ == 0) return 0.0;
  const auto it = table_.find(key_of(stacked));
  if (it == table_.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total_);
}

double EmpiricalTrajectoryDist::integrate_over_support(
    const std::function<double(const Eigen::VectorXd&)>& fn) const {
  double acc = 0.0;
  for (const auto& [key, count] : table_) acc += fn(center_of(key));
  return acc;
}

std::vector<Eigen::VectorXd> EmpiricalTrajectoryDist::support_atoms() const {
  std::vector<Eigen::VectorXd> atoms;
  atoms.reserve(table_.size());
  for (const auto& [key, count] : table_) atoms.push_back(center_of(key));
  return atoms;
}

TimeMoments EmpiricalTrajectoryDist::moments() const {
  const int d = state_dim();
  TimeMoments m;
  m.mean.assign(T_, Eigen::VectorXd::Zero(d));
  m.cov.assign(T_, Eigen::MatrixXd::Zero(d, d));
  if (total_ == 0) return m;
  const double denom = static_cast<double>(total_);
  for (const auto& [key, count] : table_) {
    const Eigen::VectorXd x = center_of(key);
    const double w = static_cast<double>(count) / denom;
    for (int t = 0; t < T_; ++t) m.mean[t] += w * x.segment(t * d, d);
  }
  for (const auto& [key, count] : table_) {
    const Eigen::VectorXd x = center_of(key);
    const double w = static_cast<double>(count) / denom;
    for (int t = 0; t < T_; ++t) {
      const Eigen::VectorXd c = x.segment(t * d, d) - m.mean[t];
      m.cov[t] += w * c * c.transpose();
    }
  }
  return m;
}

Eigen::VectorXd EmpiricalTrajectoryDist::mean() const {
  const int d = state_dim();
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * T_);
  if (total_ == 0) return mu;
  const double denom = static_cast<double>(total_);
  for (const auto& [key, count] : table_) {
    mu += (static_cast<double>(count) / denom) * center_of(key);
  }
  return mu;
}

Eigen::VectorXd EmpiricalTrajectoryDist::sample(CounterRng& rng) const {
  if (total_ == 0) throw std::runtime_error("cannot sample from an empty histogram");
  std::uint64_t target = rng.next_u64() % total_;
  for (const auto& [key, count] : table_) {
    if (target < count) return center_of(key);
    target -= count;
  }
  return center_of(table_.rbegin()->first);  // unreachable
}

// ---------------------------------------------------------------------------
// Symmetry checks

std::optional<SymmetryPoint> point_symmetry(const GaussianDist& dist, double tol) {
  const Eigen::VectorXd v = dist.mean();
  const int d = static_cast<int>(v.size());
  Eigen::VectorXd sigma(d);
  for (int i = 0; i < d; ++i) sigma(i) = std::sqrt(std::max(0.0, dist.cov()(i, i)));

  // 64 quasi-random (Weyl sequence) probes in the 4-sigma box plus the mean.
  static const double kAlphas[] = {0.41421356237309515, 0.7320508075688772,
                                   0.2360679774997896,  0.6457513110645906,
                                   0.3166247903553998,  0.6055512754639891,
                                   0.1231056256176605,  0.35889894354067355};
  std::vector<Eigen::VectorXd> probes;
  probes.push_back(v);
  for (int k = 1; k <= 64; ++k) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) {
      const double u = frac((k + 1.0) * kAlphas[i % 8] + 0.07 * (i / 8));
      x(i) = v(i) + (2.0 * u - 1.0) * 4.0 * sigma(i);
    }
    probes.push_back(std::move(x));
  }

  for (const Eigen::VectorXd& x : probes) {
    const double f = dist.density(x);
    const double g = dist.density(2.0 * v - x);
    const double scale = std::max(f, g);
    if (scale == 0.0) continue;
    if (std::abs(f - g) > tol * scale) return std::nullopt;
  }
  return SymmetryPoint{v};
}

std::optional<SymmetryPoint> point_symmetry(const RandomWalkDist& dist, double tol) {
  const Eigen::VectorXd v = dist.mean();
  for (const auto& [x, p] : dist.enumerate()) {
    const double g = dist.density(2.0 * v - x);
    if (std::abs(p - g) > tol * std::max(p, g)) return std::nullopt;
  }
  return SymmetryPoint{v};
}

std::optional<SymmetryPoint> point_symmetry(const EmpiricalTrajectoryDist& dist,
                                            double tol) {
  if (dist.table().size() < 2) return std::nullopt;  // a lone bin certifies nothing
  const Eigen::VectorXd v = dist.mean();
  const double total = static_cast<double>(dist.total());
  for (const auto& [key, count] : dist.table()) {
    const double f = static_cast<double>(count) / total;
    const double g = dist.density(2.0 * v - dist.center_of(key));
    const double rel_tol = std::max(tol, 3.0 / std::sqrt(static_cast<double>(count)));
    if (std::abs(f - g) > rel_tol * f) return std::nullopt;
  }
  return SymmetryPoint{v};
}

bool markov_symmetry_check(const FiniteMarkovChain& chain, double tol) {
  if (chain.initial.empty() || chain.horizon < 1) return false;

  double mu = 0.0;
  double mass = 0.0;
  for (const auto& [s, p] : chain.initial) {
    mu += s * p;
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-6) return false;

  const double twice_mu = 2.0 * mu;
  if (std::abs(twice_mu - std::round(twice_mu)) > 1e-6) return false;
  const int two_v = static_cast<int>(std::round(twice_mu));
  auto reflect = [two_v](int s) { return two_v - s; };

  auto mirrored = [&](const std::map<int, double>& pmf) {
    std::map<int, double> out;
    for (const auto& [s, p] : pmf) out[reflect(s)] = p;
    return out;
  };
  auto same_pmf = [tol](const std::map<int, double>& a, const std::map<int, double>& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [s, p] : a) {
      const auto it = b.find(s);
      if (it == b.end() || std::abs(it->second - p) > tol) return false;
    }
    return true;
  };

  if (!same_pmf(chain.initial, mirrored(chain.initial))) return false;

  // Kernel equivariance about the fixed point, over every state reachable
  // within the horizon.
  std::map<int, bool> frontier;
  for (const auto& [s, p] : chain.initial) frontier[s] = true;
  std::map<int, bool> checked;
  for (int step = 1; step < chain.horizon; ++step) {
    std::map<int, bool> next;
    for (const auto& [s, unused] : frontier) {
      if (!checked[s]) {
        checked[s] = true;
        if (!same_pmf(chain.kernel(reflect(s)), mirrored(chain.kernel(s)))) {
          return false;
        }
      }
      for (const auto& [nxt, p] : chain.kernel(s)) next[nxt] = true;
    }
    frontier = std::move(next);
  }
  return true;
}

FiniteMarkovChain chain_of(const RandomWalkDist& dist) {
  FiniteMarkovChain chain;
  chain.initial = dist.initial_law();
  chain.kernel = [dist](int s) { return dist.kernel(s); };
  chain.horizon = dist.horizon();
  return chain;
}

bool markov_symmetry_check(const RandomWalkDist& dist, double tol) {
  return markov_symmetry_check(chain_of(dist), tol);
}

SymmetryPoint affine_pushforward_symmetry(const SymmetryPoint& v,
                                          const Eigen::MatrixXd& M1,
                                          const Eigen::VectorXd& M2) {
  if (M1.cols() != v.point.size() || M1.rows() != M2.size()) {
    throw std::invalid_argument("affine map dimension mismatch");
  }
  return SymmetryPoint{M1 * v.point + M2};
}

EmpiricalTrajectoryDist empirical_from_runs(const std::vector<Trajectory>& runs,
                                            double bin_width,
                                            const Eigen::VectorXd& origin,
                                            const std::vector<int>& coords) {
  if (runs.empty()) throw std::invalid_argument("need at least one run");
  if (origin.size() != static_cast<Eigen::Index>(coords.size())) {
    throw std::invalid_argument("origin must have one entry per selected coordinate");
  }
  const int T = runs.front().horizon();
  const int d = static_cast<int>(coords.size());
  EmpiricalTrajectoryDist dist(bin_width, origin, T);
  Eigen::VectorXd stacked(static_cast<Eigen::Index>(d) * T);
  for (const Trajectory& run : runs) {
    if (run.horizon() != T) {
      throw std::invalid_argument("all runs must share one horizon");
    }
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd& x = run.states[t];
      for (int i = 0; i < d; ++i) {
        if (coords[i] < 0 || coords[i] >= x.size()) {
          throw std::invalid_argument("selected coordinate out of range");
        }
        stacked(t * d + i) = x(coords[i]);
      }
    }
    dist.record(stacked);
  }
  return dist;
}

}  // namespace distortia
