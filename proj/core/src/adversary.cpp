#include "distortia/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace distortia {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_planes(const TrajectoryLaw& law, const std::vector<MirrorPlane>& planes) {
  if (static_cast<int>(planes.size()) != law.horizon()) {
    throw std::invalid_argument("need exactly one mirror per time step of the law");
  }
  for (const MirrorPlane& p : planes) {
    if (p.ambient_dim() != law.state_dim()) {
      throw std::invalid_argument("mirror dimension does not match the law");
    }
  }
}

void check_scheme(const TrajectoryLaw& law, const MirrorScheme& scheme) {
  if (scheme.horizon() != law.horizon()) {
    throw std::invalid_argument("scheme horizon does not match the law");
  }
  if (scheme.state_dim() != law.state_dim()) {
    throw std::invalid_argument("scheme dimension does not match the law");
  }
}

double log_add(double a, double b) {
  if (std::isinf(a) && a < 0.0) return b;
  if (std::isinf(b) && b < 0.0) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

bool same_candidate(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(1.0, a.lpNorm<Eigen::Infinity>());
  return (a - b).lpNorm<Eigen::Infinity>() <= 1e-9 * scale;
}

// Drop zero-density candidates, merge coinciding decodes (their
// probabilities add), and normalize with a max-shift so tiny densities
// survive in the ratios.
AmbiguitySet make_posterior(std::vector<Eigen::VectorXd> cands,
                            const std::vector<double>& log_density, int horizon) {
  double lmax = kNegInf;
  for (double l : log_density) lmax = std::max(lmax, l);
  if (!std::isfinite(lmax)) {
    throw std::runtime_error(
        "observed symbols have zero density under every key: impossible transmission");
  }
  std::vector<Eigen::VectorXd> merged;
  std::vector<double> weight;
  merged.reserve(cands.size());
  weight.reserve(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (std::isinf(log_density[i]) && log_density[i] < 0.0) continue;
    const double w = std::exp(log_density[i] - lmax);
    bool absorbed = false;
    for (std::size_t j = 0; j < merged.size(); ++j) {
      if (same_candidate(merged[j], cands[i])) {
        weight[j] += w;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) {
      merged.push_back(std::move(cands[i]));
      weight.push_back(w);
    }
  }
  double total = 0.0;
  for (double w : weight) total += w;
  for (double& w : weight) w /= total;
  return AmbiguitySet(std::move(merged), std::move(weight), horizon);
}

std::vector<Key> all_keys(int bits) {
  std::vector<Key> keys;
  keys.reserve(std::size_t{1} << bits);
  for (std::uint32_t v = 0; v < (1u << bits); ++v) keys.emplace_back(v, bits);
  return keys;
}

// Deterministic probe set for symmetry audits on continuous laws: seeded
// samples from the law itself plus its mean.
std::vector<Eigen::VectorXd> symmetry_probes(const TrajectoryLaw& law) {
  std::vector<Eigen::VectorXd> probes;
  probes.reserve(257);
  CounterRng rng(0x73796d6d, 11);
  for (int i = 0; i < 256; ++i) probes.push_back(law.sample(rng));
  probes.push_back(law.mean());
  return probes;
}

bool densities_close(double fa, double fb, double tol) {
  const double scale = std::max(fa, fb);
  if (scale <= 0.0) return true;  // both outside the support
  return std::abs(fa - fb) <= tol * scale;
}

}  // namespace

AmbiguitySet::AmbiguitySet(std::vector<Eigen::VectorXd> candidates_in,
                           std::vector<double> weights_in, int horizon_in)
    : candidates(std::move(candidates_in)), weights(std::move(weights_in)),
      horizon(horizon_in) {
  if (candidates.empty() || candidates.size() != weights.size()) {
    throw std::invalid_argument("ambiguity set needs matching candidates and weights");
  }
  if (horizon < 1) throw std::invalid_argument("ambiguity horizon must be at least 1");
  const Eigen::Index dim = candidates.front().size();
  if (dim % horizon != 0) {
    throw std::invalid_argument("candidate length is not a multiple of the horizon");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (candidates[i].size() != dim) {
      throw std::invalid_argument("all candidates must share one dimension");
    }
    if (weights[i] < 0.0) throw std::invalid_argument("posterior weights must be nonnegative");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("posterior weights must sum to 1");
  }
}

Eigen::VectorXd AmbiguitySet::state_at(int i, int t) const {
  if (i < 0 || i >= size()) throw std::invalid_argument("candidate index out of range");
  if (t < 0 || t >= horizon) throw std::invalid_argument("time index out of range");
  const int n = state_dim();
  return candidates[i].segment(static_cast<Eigen::Index>(t) * n, n);
}

double bernoulli_var(double a, double b, double p_a) {
  if (p_a < 0.0 || p_a > 1.0) {
    throw std::invalid_argument("probability must lie in [0, 1]");
  }
  return p_a * (1.0 - p_a) * (a - b) * (a - b);
}

AmbiguitySet posterior_1bit(const TrajectoryLaw& law, const EncodedTrajectory& z,
                            const std::vector<MirrorPlane>& planes) {
  check_planes(law, planes);
  if (z.horizon() != law.horizon()) {
    throw std::invalid_argument("symbol count does not match the law's horizon");
  }
  StateSequence mirrored(z.symbols.size());
  for (std::size_t t = 0; t < z.symbols.size(); ++t) {
    mirrored[t] = planes[t].reflect(z.symbols[t]);
  }
  std::vector<Eigen::VectorXd> cands;
  cands.push_back(stack_states(z.symbols));
  cands.push_back(stack_states(mirrored));
  std::vector<double> logf = {law.log_density(cands[0]), law.log_density(cands[1])};
  return make_posterior(std::move(cands), logf, law.horizon());
}

AmbiguitySet posterior_kbit(const TrajectoryLaw& law, const EncodedTrajectory& z,
                            const MirrorScheme& scheme) {
  check_scheme(law, scheme);
  if (z.horizon() != scheme.horizon()) {
    throw std::invalid_argument("symbol count does not match the scheme horizon");
  }
  std::vector<Eigen::VectorXd> cands;
  std::vector<double> logf;
  const std::vector<Key> keys = all_keys(scheme.bits());
  cands.reserve(keys.size());
  logf.reserve(keys.size());
  for (const Key& key : keys) {
    cands.push_back(stack_states(decode_kbit(z, scheme, key)));
    logf.push_back(law.log_density(cands.back()));
  }
  return make_posterior(std::move(cands), logf, law.horizon());
}

AmbiguitySet posterior_sm_scalar(const ScalarDensity& density, double z,
                                 const SMScheme& scheme) {
  std::vector<Eigen::VectorXd> cands;
  std::vector<double> logf;
  auto push = [&](double value, double multiplicity) {
    Eigen::VectorXd c(1);
    c(0) = value;
    cands.push_back(std::move(c));
    const double f = density(value);
    logf.push_back(f > 0.0 ? std::log(f * multiplicity) : kNegInf);
  };
  if (z >= -scheme.theta && z < scheme.theta) {
    for (int k = 0; k < scheme.key_count(); ++k) {
      push(interval_mod(z - k * scheme.shift(), -scheme.theta, scheme.theta), 1.0);
    }
  } else {
    // Every key only ever flips the sign out here, half of them each way.
    push(z, scheme.key_count() / 2.0);
    push(-z, scheme.key_count() / 2.0);
  }
  return make_posterior(std::move(cands), logf, 1);
}

Eigen::VectorXd mmse_estimate(const AmbiguitySet& amb, int t) {
  Eigen::VectorXd est = Eigen::VectorXd::Zero(amb.state_dim());
  for (int i = 0; i < amb.size(); ++i) est += amb.weights[i] * amb.state_at(i, t);
  return est;
}

double conditional_distortion(const AmbiguitySet& amb, int t) {
  const Eigen::VectorXd est = mmse_estimate(amb, t);
  double acc = 0.0;
  for (int i = 0; i < amb.size(); ++i) {
    acc += amb.weights[i] * (amb.state_at(i, t) - est).squaredNorm();
  }
  return acc;
}

double average_conditional_distortion(const AmbiguitySet& amb) {
  double acc = 0.0;
  for (int t = 0; t < amb.horizon; ++t) acc += conditional_distortion(amb, t);
  return acc / amb.horizon;
}

std::vector<double> per_time_distortion_closed_1bit(
    const TrajectoryLaw& law, const std::vector<MirrorPlane>& planes) {
  check_planes(law, planes);
  const int T = law.horizon();
  const int n = law.state_dim();
  std::vector<double> out(T);
  for (int t = 0; t < T; ++t) {
    out[t] = 0.5 * law.integrate_over_support([&](const Eigen::VectorXd& x) {
      Eigen::VectorXd xm(x.size());
      for (int s = 0; s < T; ++s) {
        xm.segment(static_cast<Eigen::Index>(s) * n, n) =
            planes[s].reflect(x.segment(static_cast<Eigen::Index>(s) * n, n));
      }
      const double la = law.log_density(x);
      const double lb = law.log_density(xm);
      if (!std::isfinite(la) || !std::isfinite(lb)) return 0.0;
      const double gap = (x.segment(static_cast<Eigen::Index>(t) * n, n) -
                          xm.segment(static_cast<Eigen::Index>(t) * n, n))
                             .squaredNorm();
      return std::exp(la + lb - log_add(la, lb)) * gap;
    });
  }
  return out;
}

double avg_distortion_closed_1bit(const TrajectoryLaw& law,
                                  const std::vector<MirrorPlane>& planes) {
  const std::vector<double> per_time = per_time_distortion_closed_1bit(law, planes);
  double acc = 0.0;
  for (double d : per_time) acc += d;
  return acc / per_time.size();
}

double avg_distortion_closed_1bit_symmetric(const TrajectoryLaw& law,
                                            const std::vector<MirrorPlane>& planes) {
  check_planes(law, planes);
  const int T = law.horizon();
  const int n = law.state_dim();
  const double total = law.integrate_over_support([&](const Eigen::VectorXd& x) {
    const double f = law.density(x);
    if (f <= 0.0) return 0.0;
    double gap = 0.0;
    for (int s = 0; s < T; ++s) {
      const Eigen::VectorXd xs = x.segment(static_cast<Eigen::Index>(s) * n, n);
      gap += (xs - planes[s].reflect(xs)).squaredNorm();
    }
    return f * gap;
  });
  return total / (4.0 * T);
}

bool check_mirror_symmetry_condition(const TrajectoryLaw& law,
                                     const std::vector<MirrorPlane>& planes,
                                     double tol) {
  check_planes(law, planes);
  const int T = law.horizon();
  const int n = law.state_dim();
  std::vector<Eigen::VectorXd> probes = law.support_atoms();
  if (probes.empty()) probes = symmetry_probes(law);
  for (const Eigen::VectorXd& x : probes) {
    Eigen::VectorXd xm(x.size());
    for (int s = 0; s < T; ++s) {
      xm.segment(static_cast<Eigen::Index>(s) * n, n) =
          planes[s].reflect(x.segment(static_cast<Eigen::Index>(s) * n, n));
    }
    if (!densities_close(law.density(x), law.density(xm), tol)) return false;
  }
  return true;
}

double avg_distortion_mirrorplane_closed(const TimeMoments& moments,
                                         const std::vector<MirrorPlane>& planes) {
  const int T = moments.horizon();
  if (T < 1) throw std::invalid_argument("moments must cover at least one step");
  if (static_cast<int>(planes.size()) != T) {
    throw std::invalid_argument("need exactly one mirror per time step");
  }
  double acc = 0.0;
  for (int t = 0; t < T; ++t) {
    const Eigen::MatrixXd& S = planes[t].S();
    if (S.cols() != moments.mean[t].size()) {
      throw std::invalid_argument("mirror dimension does not match the moments");
    }
    if (S.rows() == 0) continue;  // identity map contributes nothing
    acc += (S * moments.cov[t] * S.transpose()).trace() +
           (planes[t].b() - S * moments.mean[t]).squaredNorm();
  }
  return acc / T;
}

std::vector<double> per_time_distortion_closed_kbit(const TrajectoryLaw& law,
                                                    const MirrorScheme& scheme) {
  check_scheme(law, scheme);
  const int T = law.horizon();
  const int n = law.state_dim();
  const std::vector<Key> keys = all_keys(scheme.bits());
  std::vector<double> out(T);
  for (int t = 0; t < T; ++t) {
    out[t] = law.integrate_over_support([&](const Eigen::VectorXd& x) {
      const double f = law.density(x);
      if (f <= 0.0) return 0.0;
      const StateSequence states = unstack_states(x, n);
      double acc = 0.0;
      for (const Key& key : keys) {
        const AmbiguitySet amb =
            posterior_kbit(law, encode_kbit(states, scheme, key), scheme);
        acc += conditional_distortion(amb, t);
      }
      return f * acc / static_cast<double>(keys.size());
    });
  }
  return out;
}

double avg_distortion_closed_kbit(const TrajectoryLaw& law,
                                  const MirrorScheme& scheme) {
  check_scheme(law, scheme);
  const int n = law.state_dim();
  const std::vector<Key> keys = all_keys(scheme.bits());
  return law.integrate_over_support([&](const Eigen::VectorXd& x) {
    const double f = law.density(x);
    if (f <= 0.0) return 0.0;
    const StateSequence states = unstack_states(x, n);
    double acc = 0.0;
    for (const Key& key : keys) {
      const AmbiguitySet amb =
          posterior_kbit(law, encode_kbit(states, scheme, key), scheme);
      acc += average_conditional_distortion(amb);
    }
    return f * acc / static_cast<double>(keys.size());
  });
}

double avg_distortion_closed_kbit_symmetric(const TrajectoryLaw& law,
                                            const MirrorScheme& scheme) {
  check_scheme(law, scheme);
  const int T = law.horizon();
  const int n = law.state_dim();
  const std::vector<Key> keys = all_keys(scheme.bits());
  const double count = static_cast<double>(keys.size());
  const double total = law.integrate_over_support([&](const Eigen::VectorXd& x) {
    const double f = law.density(x);
    if (f <= 0.0) return 0.0;
    double acc = 0.0;
    std::vector<Eigen::VectorXd> pre(keys.size());
    for (int t = 0; t < T; ++t) {
      const Eigen::VectorXd xt = x.segment(static_cast<Eigen::Index>(t) * n, n);
      Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i < keys.size(); ++i) {
        pre[i] = invert_kbit(scheme, t, xt, keys[i]);
        center += pre[i];
      }
      center /= count;
      for (const Eigen::VectorXd& p : pre) acc += (p - center).squaredNorm();
    }
    return f * acc / count;
  });
  return total / T;
}

bool check_kbit_symmetry_condition(const TrajectoryLaw& law,
                                   const MirrorScheme& scheme, double tol) {
  check_scheme(law, scheme);
  const int T = law.horizon();
  const int n = law.state_dim();
  const std::vector<Key> keys = all_keys(scheme.bits());
  std::vector<Eigen::VectorXd> probes = law.support_atoms();
  if (probes.empty()) probes = symmetry_probes(law);
  for (const Eigen::VectorXd& x : probes) {
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = 0.0;
    for (const Key& key : keys) {
      Eigen::VectorXd decode(x.size());
      for (int t = 0; t < T; ++t) {
        decode.segment(static_cast<Eigen::Index>(t) * n, n) =
            invert_kbit(scheme, t, x.segment(static_cast<Eigen::Index>(t) * n, n), key);
      }
      const double f = law.density(decode);
      fmin = std::min(fmin, f);
      fmax = std::max(fmax, f);
    }
    if (fmax > 0.0 && (fmax - fmin) > tol * fmax) return false;
  }
  return true;
}

MonteCarloResult avg_distortion_monte_carlo(const TrajectoryLaw& law,
                                            const TrajectoryEncoder& encode,
                                            const TrajectoryPosterior& posterior,
                                            std::int64_t num_samples,
                                            std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("need at least one sample");
  CounterRng traj_rng(seed, 0);
  CounterRng key_rng(seed, 1);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t i = 1; i <= num_samples; ++i) {
    const StateSequence states = unstack_states(law.sample(traj_rng), law.state_dim());
    const double value = average_conditional_distortion(posterior(encode(states, key_rng)));
    const double delta = value - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (value - mean);
  }
  const double std_error =
      num_samples > 1
          ? std::sqrt(m2 / static_cast<double>(num_samples - 1) /
                      static_cast<double>(num_samples))
          : 0.0;
  return {mean, std_error};
}

MonteCarloResult avg_distortion_monte_carlo_1bit(const TrajectoryLaw& law,
                                                 const std::vector<MirrorPlane>& planes,
                                                 std::int64_t num_samples,
                                                 std::uint64_t seed) {
  check_planes(law, planes);
  return avg_distortion_monte_carlo(
      law,
      [&](const StateSequence& states, CounterRng& rng) {
        return encode_1bit(states, planes, Key::draw(rng, 1));
      },
      [&](const EncodedTrajectory& z) { return posterior_1bit(law, z, planes); },
      num_samples, seed);
}

MonteCarloResult avg_distortion_monte_carlo_kbit(const TrajectoryLaw& law,
                                                 const MirrorScheme& scheme,
                                                 std::int64_t num_samples,
                                                 std::uint64_t seed) {
  check_scheme(law, scheme);
  return avg_distortion_monte_carlo(
      law,
      [&](const StateSequence& states, CounterRng& rng) {
        return encode_kbit(states, scheme, Key::draw(rng, scheme.bits()));
      },
      [&](const EncodedTrajectory& z) { return posterior_kbit(law, z, scheme); },
      num_samples, seed);
}

std::vector<double> build_z_grid(const SMScheme& scheme, const ZGrid& grid) {
  if (!(grid.step > 0.0) || !(grid.pad >= 0.0) || !(grid.boundary_eps > 0.0)) {
    throw std::invalid_argument("malformed symbol grid");
  }
  const double lo = -(scheme.theta + grid.pad);
  const double hi = scheme.theta + grid.pad;
  const long steps = static_cast<long>(std::floor((hi - lo) / grid.step + 1e-9));
  std::vector<double> zs;
  zs.reserve(static_cast<std::size_t>(steps) + 2 * (scheme.key_count() + 1) + 2);
  for (long i = 0; i <= steps; ++i) {
    zs.push_back(lo + static_cast<double>(i) * grid.step);
  }
  for (int j = 0; j <= scheme.key_count(); ++j) {
    const double edge = -scheme.theta + static_cast<double>(j) * scheme.shift();
    zs.push_back(edge - grid.boundary_eps);
    zs.push_back(edge + grid.boundary_eps);
  }
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  return zs;
}

WorstCase worst_case_distortion(const SMScheme& scheme,
                                const std::vector<double>& z_grid,
                                const ScalarDensity& density) {
  if (z_grid.empty()) {
    throw std::invalid_argument("worst-case scan needs a nonempty symbol grid");
  }
  std::vector<double> zs = z_grid;
  std::sort(zs.begin(), zs.end());
  const int count = scheme.key_count();
  const double shift = scheme.shift();
  std::vector<double> value(count);
  std::vector<double> weight(count);
  double best = std::numeric_limits<double>::infinity();
  double best_z = std::numeric_limits<double>::quiet_NaN();
  for (double z : zs) {
    int m = 0;
    if (z >= -scheme.theta && z < scheme.theta) {
      for (int k = 0; k < count; ++k) {
        value[k] = interval_mod(z - k * shift, -scheme.theta, scheme.theta);
        weight[k] = density(value[k]);
      }
      m = count;
    } else {
      // Only the sign is in play; the equal key multiplicities cancel.
      value[0] = z;
      weight[0] = density(z);
      value[1] = -z;
      weight[1] = density(-z);
      m = 2;
    }
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += weight[i];
    if (!(total > 0.0)) continue;
    double mean = 0.0;
    for (int i = 0; i < m; ++i) mean += weight[i] * value[i];
    mean /= total;
    double var = 0.0;
    for (int i = 0; i < m; ++i) {
      var += weight[i] * (value[i] - mean) * (value[i] - mean);
    }
    var /= total;
    if (var < best) {
      best = var;
      best_z = z;
    }
  }
  if (!std::isfinite(best)) {
    throw std::runtime_error("every grid symbol lies outside the source support");
  }
  return {best, best_z};
}

WorstCase worst_case_distortion(const ScalarAmbiguity& ambiguity_of,
                                const std::vector<double>& z_grid) {
  if (z_grid.empty()) {
    throw std::invalid_argument("worst-case scan needs a nonempty symbol grid");
  }
  std::vector<double> zs = z_grid;
  std::sort(zs.begin(), zs.end());
  double best = std::numeric_limits<double>::infinity();
  double best_z = std::numeric_limits<double>::quiet_NaN();
  for (double z : zs) {
    const AmbiguitySet amb = ambiguity_of(z);
    for (int t = 0; t < amb.horizon; ++t) {
      const double var = conditional_distortion(amb, t);
      if (var < best) {
        best = var;
        best_z = z;
      }
    }
  }
  return {best, best_z};
}

double worst_case_distortion_enumerated(const TrajectoryLaw& law,
                                        const MirrorScheme& scheme) {
  check_scheme(law, scheme);
  const std::vector<Eigen::VectorXd> atoms = law.support_atoms();
  if (atoms.empty()) {
    throw std::invalid_argument("exhaustive worst case needs a discrete law");
  }
  const std::vector<Key> keys = all_keys(scheme.bits());
  double best = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& atom : atoms) {
    const StateSequence states = unstack_states(atom, law.state_dim());
    for (const Key& key : keys) {
      const AmbiguitySet amb =
          posterior_kbit(law, encode_kbit(states, scheme, key), scheme);
      for (int t = 0; t < amb.horizon; ++t) {
        best = std::min(best, conditional_distortion(amb, t));
      }
      if (best == 0.0) return best;  // variances cannot go lower
    }
  }
  return best;
}

std::vector<EvolutionPoint> trajectory_distortion_evolution(
    const TrajectoryCipher& cipher, int t_max, const ZGrid& grid) {
  if (t_max < 0) throw std::invalid_argument("horizon must be nonnegative");
  const int n = cipher.init_scheme.dim();
  // Per-coordinate worst case of the standardized scalar rule; coordinates
  // sharing a scheme share one scan.
  std::vector<double> dw(n);
  std::vector<std::pair<std::pair<int, double>, double>> cache;
  for (int i = 0; i < n; ++i) {
    const SMScheme& sc = cipher.init_scheme.schemes[i];
    bool found = false;
    for (const auto& entry : cache) {
      if (entry.first.first == sc.bits && entry.first.second == sc.theta) {
        dw[i] = entry.second;
        found = true;
        break;
      }
    }
    if (!found) {
      dw[i] = worst_case_distortion(sc, build_z_grid(sc, grid)).distortion;
      cache.push_back({{sc.bits, sc.theta}, dw[i]});
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cipher.A);
  const Eigen::VectorXd sv = svd.singularValues();
  std::vector<EvolutionPoint> out;
  out.reserve(t_max + 1);
  Eigen::MatrixXd a_pow = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd sv_pow = Eigen::VectorXd::Ones(n);
  for (int t = 0; t <= t_max; ++t) {
    const Eigen::MatrixXd gram = a_pow.transpose() * a_pow;
    double measured = 0.0;
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
      const double variance = cipher.init_scheme.sigma(i) * cipher.init_scheme.sigma(i);
      measured += gram(i, i) * variance * dw[i];
      bound += sv_pow(i) * variance;
    }
    out.push_back({t, measured, cipher.c * bound});
    a_pow = cipher.A * a_pow;
    for (int i = 0; i < n; ++i) sv_pow(i) *= sv(i) * sv(i);
  }
  return out;
}

Baselines no_observation_baselines(const TimeMoments& moments) {
  if (moments.horizon() < 1) {
    throw std::invalid_argument("moments must cover at least one step");
  }
  double avg = 0.0;
  double min_trace = std::numeric_limits<double>::infinity();
  for (int t = 0; t < moments.horizon(); ++t) {
    const double trace = moments.cov[t].trace();
    avg += trace;
    min_trace = std::min(min_trace, trace);
  }
  return {avg / moments.horizon(), min_trace};
}

DistortionReport::DistortionReport(std::vector<double> per_time_in, double D_E_in,
                                   double D_W_in, double D_E_max_in, double D_W_max_in)
    : per_time(std::move(per_time_in)), D_E(D_E_in), D_W(D_W_in), D_E_max(D_E_max_in),
      D_W_max(D_W_max_in) {
  constexpr double slack = 1e-9;
  if (!(D_E >= 0.0) || !(D_W >= 0.0)) {
    throw std::runtime_error("distortion must be nonnegative");
  }
  if (D_E > D_E_max * (1.0 + slack)) {
    throw std::runtime_error("average distortion exceeds the no-observation ceiling");
  }
  if (D_W > D_W_max * (1.0 + slack)) {
    throw std::runtime_error("worst-case distortion exceeds the no-observation ceiling");
  }
}

}  // namespace distortia
