#include "distortia/enc_mirror.hpp"

#include <stdexcept>
#include <string>

namespace distortia {

Key::Key(std::uint32_t value_in, int bits_in) : value(value_in), bits(bits_in) {
  if (bits < 1 || bits > 31) {
    throw std::invalid_argument("key width must be between 1 and 31 bits");
  }
  if (value >= (1u << bits)) {
    throw std::invalid_argument("key value does not fit in " + std::to_string(bits) +
                                " bits");
  }
}

Key Key::draw(CounterRng& rng, int bits) {
  if (bits < 1 || bits > 31) {
    throw std::invalid_argument("key width must be between 1 and 31 bits");
  }
  return Key(static_cast<std::uint32_t>(rng.next_u64() & ((1u << bits) - 1)), bits);
}

MirrorPlane::MirrorPlane(Eigen::MatrixXd S, Eigen::VectorXd b)
    : S_(std::move(S)), b_(std::move(b)) {
  if (S_.rows() != b_.size()) {
    throw std::invalid_argument("mirror plane needs one offset entry per row of S");
  }
  if (S_.rows() > S_.cols()) {
    throw std::invalid_argument("mirror plane cannot have more rows than the ambient dimension");
  }
  if (S_.rows() == 0) return;

  const Eigen::MatrixXd gram = S_ * S_.transpose();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(S_.rows(), S_.rows());
  const double defect = (gram - eye).cwiseAbs().maxCoeff();
  if (defect <= 1e-10) return;
  if (defect > 1e-6) {
    throw std::invalid_argument("mirror plane rows are not orthonormal");
  }
  // Mild drift: re-orthonormalize with modified Gram-Schmidt.
  for (int i = 0; i < S_.rows(); ++i) {
    for (int j = 0; j < i; ++j) {
      S_.row(i) -= S_.row(i).dot(S_.row(j)) * S_.row(j);
    }
    const double norm = S_.row(i).norm();
    if (norm < 1e-8) {
      throw std::invalid_argument("mirror plane rows are linearly dependent");
    }
    S_.row(i) /= norm;
  }
}

Eigen::VectorXd MirrorPlane::reflect(const Eigen::VectorXd& x) const {
  if (x.size() != S_.cols()) {
    throw std::invalid_argument("reflect: state dimension mismatch");
  }
  if (S_.rows() == 0) return x;
  return x - 2.0 * (S_.transpose() * (S_ * x)) + 2.0 * (S_.transpose() * b_);
}

MirrorPlane MirrorPlane::identity(int ambient_dim) {
  return MirrorPlane(Eigen::MatrixXd::Zero(0, ambient_dim), Eigen::VectorXd::Zero(0));
}

MirrorPlane MirrorPlane::point(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  return MirrorPlane(Eigen::MatrixXd::Identity(n, n), v);
}

Eigen::VectorXd reflect(const MirrorPlane& plane, const Eigen::VectorXd& x) {
  return plane.reflect(x);
}

MirrorScheme::MirrorScheme(std::vector<std::vector<MirrorPlane>> planes_in)
    : planes(std::move(planes_in)) {
  if (planes.empty()) throw std::invalid_argument("mirror scheme needs at least one step");
  const std::size_t k = planes[0].size();
  const int n = planes[0].empty() ? 0 : planes[0][0].ambient_dim();
  for (const auto& bank : planes) {
    if (bank.size() != k) {
      throw std::invalid_argument("every time step must carry the same number of mirrors");
    }
    for (const MirrorPlane& p : bank) {
      if (p.ambient_dim() != n) {
        throw std::invalid_argument("all mirrors must share the ambient dimension");
      }
    }
  }
  if (k == 0) throw std::invalid_argument("mirror scheme needs at least one key bit");
}

int MirrorScheme::state_dim() const {
  return planes.empty() || planes[0].empty() ? 0 : planes[0][0].ambient_dim();
}

MirrorScheme MirrorScheme::repeated(std::vector<MirrorPlane> per_bit, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  std::vector<std::vector<MirrorPlane>> banks;
  banks.reserve(horizon);
  for (int t = 0; t < horizon; ++t) banks.push_back(per_bit);
  return MirrorScheme(std::move(banks));
}

namespace {

void check_key_width(const Key& key, int expected_bits) {
  if (key.bits != expected_bits) {
    throw std::invalid_argument("key width " + std::to_string(key.bits) +
                                " does not match the scheme's " +
                                std::to_string(expected_bits) + " mirrors");
  }
}

}  // namespace

EncodedTrajectory encode_1bit(const StateSequence& states,
                              const std::vector<MirrorPlane>& planes, const Key& key) {
  check_key_width(key, 1);
  if (states.size() != planes.size()) {
    throw std::invalid_argument("need exactly one mirror per time step");
  }
  EncodedTrajectory out;
  out.symbols.reserve(states.size());
  for (std::size_t t = 0; t < states.size(); ++t) {
    out.symbols.push_back(key.bit(0) ? planes[t].reflect(states[t]) : states[t]);
  }
  return out;
}

StateSequence decode_1bit(const EncodedTrajectory& encoded,
                          const std::vector<MirrorPlane>& planes, const Key& key) {
  // Reflections are involutions, so decoding is re-encoding.
  return encode_1bit(encoded.symbols, planes, key).symbols;
}

Eigen::VectorXd apply_kbit(const MirrorScheme& scheme, int t, const Eigen::VectorXd& x,
                           const Key& key) {
  check_key_width(key, scheme.bits());
  if (t < 0 || t >= scheme.horizon()) {
    throw std::invalid_argument("time index out of range");
  }
  Eigen::VectorXd y = x;
  for (int i = 0; i < key.bits; ++i) {
    if (key.bit(i)) y = scheme.planes[t][i].reflect(y);
  }
  return y;
}

Eigen::VectorXd invert_kbit(const MirrorScheme& scheme, int t, const Eigen::VectorXd& z,
                            const Key& key) {
  check_key_width(key, scheme.bits());
  if (t < 0 || t >= scheme.horizon()) {
    throw std::invalid_argument("time index out of range");
  }
  Eigen::VectorXd y = z;
  for (int i = key.bits - 1; i >= 0; --i) {
    if (key.bit(i)) y = scheme.planes[t][i].reflect(y);
  }
  return y;
}

EncodedTrajectory encode_kbit(const StateSequence& states, const MirrorScheme& scheme,
                              const Key& key) {
  if (static_cast<int>(states.size()) != scheme.horizon()) {
    throw std::invalid_argument("state sequence length must match the scheme horizon");
  }
  EncodedTrajectory out;
  out.symbols.reserve(states.size());
  for (int t = 0; t < scheme.horizon(); ++t) {
    out.symbols.push_back(apply_kbit(scheme, t, states[t], key));
  }
  return out;
}

StateSequence decode_kbit(const EncodedTrajectory& encoded, const MirrorScheme& scheme,
                          const Key& key) {
  if (encoded.horizon() != scheme.horizon()) {
    throw std::invalid_argument("symbol sequence length must match the scheme horizon");
  }
  StateSequence out;
  out.reserve(encoded.symbols.size());
  for (int t = 0; t < scheme.horizon(); ++t) {
    out.push_back(invert_kbit(scheme, t, encoded.symbols[t], key));
  }
  return out;
}

}  // namespace distortia
