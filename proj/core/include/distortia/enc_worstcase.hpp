#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "distortia/enc_mirror.hpp"
#include "distortia/lin_sys.hpp"

namespace distortia {

// Wraps r into [a, b) by shifting whole window widths.
double interval_mod(double r, double a, double b);

// Scalar shifting + mirroring rule with window half-width theta and a k-bit
// key K:
//   inside the window, x in [-theta, theta):  z = x + K * (2 theta / 2^k)
//     wrapped back into the window;
//   outside (including the boundary point x = theta, so the map stays total):
//     z = x for K < 2^(k-1), z = -x otherwise.
// Large magnitudes only risk a sign flip, so the eavesdropper's ambiguity
// never collapses no matter how far the source strays; inside the window the
// key smears the symbol across the whole window.
struct SMScheme {
  int bits = 1;
  double theta = 1.0;

  SMScheme(int bits_in, double theta_in);

  int key_count() const { return 1 << bits; }
  double shift() const { return 2.0 * theta / key_count(); }
};

double sm_encode_scalar(double x, const SMScheme& scheme, const Key& key);
double sm_decode_scalar(double z, const SMScheme& scheme, const Key& key);

// Vector source handled one coordinate at a time after standardization:
// coordinate i is mapped to (x_i - mu_i) / sigma_i, then run through its own
// scalar rule with an independent key. Transmitted symbols stay in
// standardized units; decoding undoes the standardization.
struct VectorSMScheme {
  std::vector<SMScheme> schemes;
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma;

  VectorSMScheme(std::vector<SMScheme> schemes_in, Eigen::VectorXd mu_in,
                 Eigen::VectorXd sigma_in);

  int dim() const { return static_cast<int>(mu.size()); }

  // Standardizes against the given first/second moments; every coordinate
  // gets the same k-bit window rule. Zero-variance coordinates cannot be
  // standardized and are rejected.
  static VectorSMScheme standardized(const Eigen::VectorXd& mu,
                                     const Eigen::MatrixXd& cov, int bits,
                                     double theta);
};

Eigen::VectorXd sm_encode_vector(const Eigen::VectorXd& x, const VectorSMScheme& scheme,
                                 const std::vector<Key>& keys);
Eigen::VectorXd sm_decode_vector(const Eigen::VectorXd& z, const VectorSMScheme& scheme,
                                 const std::vector<Key>& keys);

// Stream cipher for whole trajectories: only the first observation is hidden
// with the vector rule above; afterwards the transmitter sends
//   z_{t+1} = A z_t + (y_{t+1} - A y_t),
// so an eavesdropper watching the stream learns just the innovation
// y_{t+1} - A y_t, while the intended receiver unwinds the recursion from
// the decoded initial symbol. With A = 0 the stream is y itself from t = 2
// on: only the initial state stays hidden.
struct TrajectoryCipher {
  Eigen::MatrixXd A;
  VectorSMScheme init_scheme;
  // Reported guarantee constant for the evolution bound; not tuned here.
  double c = 0.9998;

  TrajectoryCipher(Eigen::MatrixXd A_in, VectorSMScheme init_scheme_in,
                   double c_in = 0.9998);
};

EncodedTrajectory traj_encode(const TrajectoryCipher& cipher,
                              const StateSequence& observations,
                              const std::vector<Key>& keys);
StateSequence traj_decode(const TrajectoryCipher& cipher,
                          const EncodedTrajectory& encoded,
                          const std::vector<Key>& keys);

// Scalar source density used by the worst-case evaluators; defaults to the
// standard normal.
using ScalarDensity = std::function<double(double)>;
ScalarDensity standard_normal_density();

// Window half-width search: maximizes the eavesdropper's worst-case
// conditional variance over a coarse theta grid on (lo, hi], then refines
// around the incumbent. Deterministic given the grids.
struct ThetaGrid {
  double lo = 0.0;      // exclusive
  double hi = 10.0;     // inclusive
  double coarse = 0.01;
  double fine = 0.001;
};

struct ThetaResult {
  double theta = 0.0;
  double worst_case = 0.0;
};

ThetaResult optimize_theta(int bits, const ThetaGrid& grid = {},
                           const ScalarDensity& density = standard_normal_density());

}  // namespace distortia
