#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "distortia/lin_sys.hpp"
#include "distortia/rng.hpp"

namespace distortia {

// Secret selector shared between transmitter and receiver: `value` holds
// `bits` independent uniform bits, one per mirror.
struct Key {
  std::uint32_t value = 0;
  int bits = 1;

  Key() = default;
  Key(std::uint32_t value_in, int bits_in);

  bool bit(int i) const { return (value >> i) & 1u; }
  static Key draw(CounterRng& rng, int bits);
};

// Reflection across the affine subspace {x : S x = b}. S has orthonormal
// rows; zero rows make the reflection the identity map. The map
// x -> (I - 2 S'S) x + 2 S'b is an involution and an isometry.
class MirrorPlane {
 public:
  // Rows within 1e-6 of orthonormal are re-orthonormalized (Gram-Schmidt);
  // anything further off is rejected.
  MirrorPlane(Eigen::MatrixXd S, Eigen::VectorXd b);

  Eigen::VectorXd reflect(const Eigen::VectorXd& x) const;

  const Eigen::MatrixXd& S() const { return S_; }
  const Eigen::VectorXd& b() const { return b_; }
  int ambient_dim() const { return static_cast<int>(S_.cols()); }

  static MirrorPlane identity(int ambient_dim);
  // Point reflection through v: S = I, b = v.
  static MirrorPlane point(const Eigen::VectorXd& v);

 private:
  Eigen::MatrixXd S_;
  Eigen::VectorXd b_;
};

Eigen::VectorXd reflect(const MirrorPlane& plane, const Eigen::VectorXd& x);

// Per-time bank of mirror planes: planes[t][i] is the mirror that key bit i
// selects at time t. All planes share one ambient state dimension.
struct MirrorScheme {
  std::vector<std::vector<MirrorPlane>> planes;

  MirrorScheme() = default;
  explicit MirrorScheme(std::vector<std::vector<MirrorPlane>> planes_in);

  int horizon() const { return static_cast<int>(planes.size()); }
  int bits() const { return planes.empty() ? 0 : static_cast<int>(planes[0].size()); }
  int state_dim() const;

  // The same per-bit plane bank at every time step.
  static MirrorScheme repeated(std::vector<MirrorPlane> per_bit, int horizon);
};

// One-bit rule: transmit each state unchanged on key 0, or its reflection on
// key 1. `planes` holds one mirror per time step.
EncodedTrajectory encode_1bit(const StateSequence& states,
                              const std::vector<MirrorPlane>& planes, const Key& key);
StateSequence decode_1bit(const EncodedTrajectory& encoded,
                          const std::vector<MirrorPlane>& planes, const Key& key);

// k-bit rule: at each time step, apply the reflections whose key bit is set,
// composed in ascending bit order (bit 0 first). Decoding applies the same
// reflections in descending order; both directions are isometries.
Eigen::VectorXd apply_kbit(const MirrorScheme& scheme, int t, const Eigen::VectorXd& x,
                           const Key& key);
Eigen::VectorXd invert_kbit(const MirrorScheme& scheme, int t, const Eigen::VectorXd& z,
                            const Key& key);
EncodedTrajectory encode_kbit(const StateSequence& states, const MirrorScheme& scheme,
                              const Key& key);
StateSequence decode_kbit(const EncodedTrajectory& encoded, const MirrorScheme& scheme,
                          const Key& key);

}  // namespace distortia
