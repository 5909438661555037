#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace distortia {

using StateSequence = std::vector<Eigen::VectorXd>;

// Discrete-time linear plant  x_{t+1} = A x_t + B u_t + w_t  with
// w_t ~ N(0, process_noise_cov). A zero covariance means a noiseless plant.
struct LinearSystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd process_noise_cov;

  LinearSystem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in,
               Eigen::MatrixXd noise_cov = Eigen::MatrixXd());

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
};

// Time-indexed transmitted symbols z_1..z_T produced by an encoder.
struct EncodedTrajectory {
  StateSequence symbols;

  int horizon() const { return static_cast<int>(symbols.size()); }
};

// A rollout: states x_1..x_T plus the inputs u_1..u_{T-1} that produced it.
struct Trajectory {
  StateSequence states;
  StateSequence inputs;
  double sample_time = 1.0;

  Trajectory() = default;
  Trajectory(StateSequence states_in, StateSequence inputs_in,
             double sample_time_in = 1.0);

  int horizon() const { return static_cast<int>(states.size()); }
};

// One transition A x + B u + w. Throws on dimension mismatch; the two-input
// overload is the noiseless w = 0 case.
Eigen::VectorXd step(const LinearSystem& sys, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& w);
Eigen::VectorXd step(const LinearSystem& sys, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& u);

// Rolls the plant forward over the given input sequence. Process noise is
// drawn from a counter-based stream keyed by `noise_seed`, so a repeated call
// with the same arguments reproduces the trajectory exactly; a zero noise
// covariance yields w_t = 0.
Trajectory simulate(const LinearSystem& sys, const Eigen::VectorXd& x_init,
                    const StateSequence& inputs, std::uint64_t noise_seed = 0,
                    double sample_time = 1.0);

// Minimum-effort point-to-point planning:
//   minimize  sum_t |u_t|^2 + state_weight * sum_{t=2}^{T-1} |x_t|^2
//   subject to the noiseless dynamics, x_1 = x_init and x_T = x_target.
// Solved as the KKT system of the equality-constrained quadratic program.
// Factors the KKT matrix once, so repeated endpoint queries are cheap; the
// solution inputs are an affine function of (x_init, x_target).
class LqrPlanner {
 public:
  LqrPlanner(const LinearSystem& sys, int horizon, double state_weight);

  StateSequence plan(const Eigen::VectorXd& x_init,
                     const Eigen::VectorXd& x_target) const;

  int horizon() const { return T_; }

 private:
  int T_ = 0;
  int n_ = 0;
  int m_ = 0;
  // Inputs stacked as a single vector: u = gain * [x_init; x_target].
  Eigen::MatrixXd input_gain_;
};

// One-shot wrapper around LqrPlanner.
StateSequence lqr_plan(const LinearSystem& sys, const Eigen::VectorXd& x_init,
                       const Eigen::VectorXd& x_target, int horizon,
                       double state_weight);

// Stacks x_1..x_T into a single column [x_1; ...; x_T] and back.
Eigen::VectorXd stack_states(const StateSequence& states);
StateSequence unstack_states(const Eigen::VectorXd& stacked, int state_dim);

// Three decoupled position/velocity double integrators sampled at Ts: a
// stand-in for a hovering vehicle moved point to point. States are ordered
// (px, py, pz, vx, vy, vz) so the first three coordinates are the positions;
// axis i couples only state pair {i, i+3} through the block [[1, Ts], [0, 1]]
// with input column [Ts^2/2, Ts].
LinearSystem quadrotor_like_model(double sample_time);

}  // namespace distortia
