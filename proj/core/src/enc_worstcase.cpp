#include "distortia/enc_worstcase.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "distortia/adversary.hpp"

namespace distortia {
namespace {

void check_key(const SMScheme& scheme, const Key& key) {
  if (key.bits != scheme.bits) {
    throw std::invalid_argument("key width does not match the scheme");
  }
}

}  // namespace

double interval_mod(double r, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("interval_mod needs a < b");
  const double width = b - a;
  double out = r - std::floor((r - a) / width) * width;
  // floor can land one window off at the edges; nudge back, then clamp.
  if (out < a) out += width;
  if (out >= b) out -= width;
  if (out < a) out = a;
  return out;
}

SMScheme::SMScheme(int bits_in, double theta_in) : bits(bits_in), theta(theta_in) {
  if (bits < 1 || bits > 30) {
    throw std::invalid_argument("key width must be between 1 and 30 bits");
  }
  if (!(theta > 0.0)) {
    throw std::invalid_argument("window half-width must be positive");
  }
}

double sm_encode_scalar(double x, const SMScheme& scheme, const Key& key) {
  check_key(scheme, key);
  if (x >= -scheme.theta && x < scheme.theta) {
    return interval_mod(x + key.value * scheme.shift(), -scheme.theta, scheme.theta);
  }
  // Large magnitudes (the boundary x = theta lands here, keeping the map
  // total) are passed through or sign-flipped by the key's top half.
  return key.value < static_cast<std::uint32_t>(scheme.key_count() / 2) ? x : -x;
}

double sm_decode_scalar(double z, const SMScheme& scheme, const Key& key) {
  check_key(scheme, key);
  if (z >= -scheme.theta && z < scheme.theta) {
    return interval_mod(z - key.value * scheme.shift(), -scheme.theta, scheme.theta);
  }
  return key.value < static_cast<std::uint32_t>(scheme.key_count() / 2) ? z : -z;
}

VectorSMScheme::VectorSMScheme(std::vector<SMScheme> schemes_in, Eigen::VectorXd mu_in,
                               Eigen::VectorXd sigma_in)
    : schemes(std::move(schemes_in)), mu(std::move(mu_in)), sigma(std::move(sigma_in)) {
  if (schemes.empty() || mu.size() != static_cast<Eigen::Index>(schemes.size()) ||
      sigma.size() != mu.size()) {
    throw std::invalid_argument(
        "per-coordinate schemes, mu, and sigma must share one dimension");
  }
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > 0.0)) {
      throw std::invalid_argument("coordinate deviations must be positive");
    }
  }
}

VectorSMScheme VectorSMScheme::standardized(const Eigen::VectorXd& mu,
                                            const Eigen::MatrixXd& cov, int bits,
                                            double theta) {
  if (cov.rows() != mu.size() || cov.cols() != mu.size()) {
    throw std::invalid_argument("covariance does not match the mean");
  }
  Eigen::VectorXd sigma(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (!(cov(i, i) > 0.0)) {
      throw std::invalid_argument("zero-variance coordinate cannot be standardized");
    }
    sigma(i) = std::sqrt(cov(i, i));
  }
  return VectorSMScheme(
      std::vector<SMScheme>(static_cast<std::size_t>(mu.size()), SMScheme(bits, theta)),
      mu, sigma);
}

Eigen::VectorXd sm_encode_vector(const Eigen::VectorXd& x, const VectorSMScheme& scheme,
                                 const std::vector<Key>& keys) {
  const int n = scheme.dim();
  if (x.size() != n) throw std::invalid_argument("input dimension mismatch");
  if (static_cast<int>(keys.size()) != n) {
    throw std::invalid_argument("need one key per coordinate");
  }
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) {
    z(i) = sm_encode_scalar((x(i) - scheme.mu(i)) / scheme.sigma(i), scheme.schemes[i],
                            keys[i]);
  }
  return z;
}

Eigen::VectorXd sm_decode_vector(const Eigen::VectorXd& z, const VectorSMScheme& scheme,
                                 const std::vector<Key>& keys) {
  const int n = scheme.dim();
  if (z.size() != n) throw std::invalid_argument("symbol dimension mismatch");
  if (static_cast<int>(keys.size()) != n) {
    throw std::invalid_argument("need one key per coordinate");
  }
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) {
    x(i) = scheme.mu(i) +
           scheme.sigma(i) * sm_decode_scalar(z(i), scheme.schemes[i], keys[i]);
  }
  return x;
}

TrajectoryCipher::TrajectoryCipher(Eigen::MatrixXd A_in, VectorSMScheme init_scheme_in,
                                   double c_in)
    : A(std::move(A_in)), init_scheme(std::move(init_scheme_in)), c(c_in) {
  if (A.rows() != A.cols()) throw std::invalid_argument("plant matrix must be square");
  if (A.rows() != init_scheme.dim()) {
    throw std::invalid_argument("plant dimension does not match the initial-symbol scheme");
  }
  if (!(c > 0.0)) throw std::invalid_argument("guarantee constant must be positive");
}

EncodedTrajectory traj_encode(const TrajectoryCipher& cipher,
                              const StateSequence& observations,
                              const std::vector<Key>& keys) {
  if (observations.empty()) throw std::invalid_argument("need at least one observation");
  const int n = cipher.init_scheme.dim();
  for (const Eigen::VectorXd& y : observations) {
    if (y.size() != n) throw std::invalid_argument("observation dimension mismatch");
  }
  EncodedTrajectory out;
  out.symbols.resize(observations.size());
  out.symbols[0] = sm_encode_vector(observations[0], cipher.init_scheme, keys);
  // Only the first symbol carries the key; from then on the stream shares
  // the plant's own recursion, so the receiver can unwind it.
  for (std::size_t t = 1; t < observations.size(); ++t) {
    out.symbols[t] =
        cipher.A * out.symbols[t - 1] + (observations[t] - cipher.A * observations[t - 1]);
  }
  return out;
}

StateSequence traj_decode(const TrajectoryCipher& cipher, const EncodedTrajectory& encoded,
                          const std::vector<Key>& keys) {
  if (encoded.symbols.empty()) throw std::invalid_argument("need at least one symbol");
  const int n = cipher.init_scheme.dim();
  for (const Eigen::VectorXd& z : encoded.symbols) {
    if (z.size() != n) throw std::invalid_argument("symbol dimension mismatch");
  }
  StateSequence out(encoded.symbols.size());
  out[0] = sm_decode_vector(encoded.symbols[0], cipher.init_scheme, keys);
  for (std::size_t t = 1; t < encoded.symbols.size(); ++t) {
    out[t] = encoded.symbols[t] - cipher.A * encoded.symbols[t - 1] + cipher.A * out[t - 1];
  }
  return out;
}

ScalarDensity standard_normal_density() {
  return [](double x) { return 0.3989422804014326779 * std::exp(-0.5 * x * x); };
}

ThetaResult optimize_theta(int bits, const ThetaGrid& grid, const ScalarDensity& density) {
  if (bits < 1 || bits > 8) {
    throw std::invalid_argument("key width must be between 1 and 8 bits for the search");
  }
  if (!(grid.lo >= 0.0) || !(grid.hi > grid.lo) || !(grid.coarse > 0.0) ||
      !(grid.fine > 0.0)) {
    throw std::invalid_argument("malformed theta grid");
  }
  const auto evaluate = [&](double theta) {
    const SMScheme scheme(bits, theta);
    return worst_case_distortion(scheme, build_z_grid(scheme), density).distortion;
  };
  ThetaResult best{0.0, -1.0};
  long evaluated = 0;
  for (long i = 1;; ++i) {
    const double theta = grid.lo + static_cast<double>(i) * grid.coarse;
    if (theta > grid.hi + 1e-12) break;
    ++evaluated;
    const double value = evaluate(theta);
    if (value > best.worst_case) best = {theta, value};
  }
  if (evaluated == 0) throw std::invalid_argument("theta grid is empty");
  // Refine around the incumbent; ties keep the smaller theta.
  const double lo = std::max(grid.lo + grid.fine, best.theta - grid.coarse);
  const double hi = std::min(grid.hi, best.theta + grid.coarse);
  for (long i = 0;; ++i) {
    const double theta = lo + static_cast<double>(i) * grid.fine;
    if (theta > hi + 1e-12) break;
    const double value = evaluate(theta);
    if (value > best.worst_case) best = {theta, value};
  }
  return best;
}

}  // namespace distortia
