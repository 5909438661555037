#include "distortia/lin_sys.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <string>

#include "distortia/rng.hpp"

namespace distortia {
namespace {

// PSD square root via eigendecomposition; tolerates semidefinite inputs
// (Cholesky would reject a rank-deficient covariance).
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("covariance eigendecomposition failed");
  }
  const double floor = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -floor) {
    throw std::invalid_argument("process noise covariance is not positive semidefinite");
  }
  Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal();
}

}  // namespace

LinearSystem::LinearSystem(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in,
                           Eigen::MatrixXd noise_cov)
    : A(std::move(A_in)), B(std::move(B_in)), process_noise_cov(std::move(noise_cov)) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("A must be square");
  }
  if (B.rows() != A.rows()) {
    throw std::invalid_argument("B must have as many rows as A");
  }
  if (process_noise_cov.size() == 0) {
    process_noise_cov = Eigen::MatrixXd::Zero(A.rows(), A.rows());
  }
  if (process_noise_cov.rows() != A.rows() || process_noise_cov.cols() != A.rows()) {
    throw std::invalid_argument("process noise covariance must be state_dim x state_dim");
  }
  if (!process_noise_cov.isApprox(process_noise_cov.transpose(), 1e-10)) {
    throw std::invalid_argument("process noise covariance must be symmetric");
  }
  if (process_noise_cov.rows() > 0) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigs(process_noise_cov,
                                                              Eigen::EigenvaluesOnly);
    if (eigs.eigenvalues().minCoeff() < -1e-10) {
      throw std::invalid_argument("process noise covariance must be positive semidefinite");
    }
  }
}

Trajectory::Trajectory(StateSequence states_in, StateSequence inputs_in,
                       double sample_time_in)
    : states(std::move(states_in)), inputs(std::move(inputs_in)),
      sample_time(sample_time_in) {
  if (states.empty()) {
    throw std::invalid_argument("trajectory needs at least one state");
  }
  if (inputs.size() + 1 != states.size()) {
    throw std::invalid_argument("trajectory needs exactly one fewer input than states");
  }
}

Eigen::VectorXd step(const LinearSystem& sys, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  if (x.size() != sys.state_dim()) {
    throw std::invalid_argument("state dimension mismatch in step: got " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(sys.state_dim()));
  }
  if (u.size() != sys.input_dim()) {
    throw std::invalid_argument("input dimension mismatch in step: got " +
                                std::to_string(u.size()) + ", expected " +
                                std::to_string(sys.input_dim()));
  }
  if (w.size() != sys.state_dim()) {
    throw std::invalid_argument("noise dimension mismatch in step: got " +
                                std::to_string(w.size()) + ", expected " +
                                std::to_string(sys.state_dim()));
  }
  return sys.A * x + sys.B * u + w;
}

Eigen::VectorXd step(const LinearSystem& sys, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& u) {
  return step(sys, x, u, Eigen::VectorXd::Zero(sys.state_dim()));
}

Trajectory simulate(const LinearSystem& sys, const Eigen::VectorXd& x_init,
                    const StateSequence& inputs, std::uint64_t noise_seed,
                    double sample_time) {
  const int n = sys.state_dim();
  if (x_init.size() != n) {
    throw std::invalid_argument("initial state dimension mismatch in simulate");
  }
  const Eigen::MatrixXd noise_sqrt = psd_sqrt(sys.process_noise_cov);
  const bool noisy = noise_sqrt.cwiseAbs().maxCoeff() > 0.0;
  CounterRng rng(noise_seed);

  StateSequence states;
  states.reserve(inputs.size() + 1);
  states.push_back(x_init);
  for (const Eigen::VectorXd& u : inputs) {
    Eigen::VectorXd x_next = step(sys, states.back(), u);
    if (noisy) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z(i) = rng.normal();
      x_next += noise_sqrt * z;
    }
    states.push_back(std::move(x_next));
  }
  return Trajectory(std::move(states), inputs, sample_time);
}

LqrPlanner::LqrPlanner(const LinearSystem& sys, int horizon, double state_weight)
    : T_(horizon), n_(sys.state_dim()), m_(sys.input_dim()) {
  if (horizon < 2) {
    throw std::invalid_argument("planning horizon must cover at least two states");
  }
  if (state_weight < 0.0) {
    throw std::invalid_argument("state weight must be nonnegative");
  }
  // Decision vector z = [x_2..x_{T-1}; u_1..u_{T-1}], constraints are the
  // T-1 dynamics equations with x_1 and x_T moved to the right-hand side.
  const int num_free_states = (T_ - 2) * n_;
  const int num_inputs = (T_ - 1) * m_;
  const int nz = num_free_states + num_inputs;
  const int nc = (T_ - 1) * n_;

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nz, nz);
  H.topLeftCorner(num_free_states, num_free_states) =
      2.0 * state_weight * Eigen::MatrixXd::Identity(num_free_states, num_free_states);
  H.bottomRightCorner(num_inputs, num_inputs) =
      2.0 * Eigen::MatrixXd::Identity(num_inputs, num_inputs);

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nc, nz);
  // Right-hand side depends affinely on the endpoints: d = D * [x_init; x_target].
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nc, 2 * n_);
  auto xcol = [&](int t) { return (t - 2) * n_; };  // x_t column block, 2 <= t <= T-1
  auto ucol = [&](int t) { return num_free_states + (t - 1) * m_; };
  for (int t = 1; t <= T_ - 1; ++t) {
    const int row = (t - 1) * n_;
    C.block(row, ucol(t), n_, m_) = -sys.B;
    if (t + 1 <= T_ - 1) {
      C.block(row, xcol(t + 1), n_, n_) = Eigen::MatrixXd::Identity(n_, n_);
    } else {
      D.block(row, n_, n_, n_) -= Eigen::MatrixXd::Identity(n_, n_);  // x_T term
    }
    if (t >= 2) {
      C.block(row, xcol(t), n_, n_) = -sys.A;
    } else {
      D.block(row, 0, n_, n_) += sys.A;  // x_1 term
    }
  }

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nz + nc, nz + nc);
  kkt.topLeftCorner(nz, nz) = H;
  kkt.topRightCorner(nz, nc) = C.transpose();
  kkt.bottomLeftCorner(nc, nz) = C;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) {
    throw std::runtime_error(
        "planning failed: singular KKT system (plant not controllable over this horizon)");
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nz + nc, 2 * n_);
  rhs.bottomRows(nc) = D;
  const Eigen::MatrixXd solution_gain = lu.solve(rhs);
  input_gain_ = solution_gain.middleRows(num_free_states, num_inputs);
}

StateSequence LqrPlanner::plan(const Eigen::VectorXd& x_init,
                               const Eigen::VectorXd& x_target) const {
  if (x_init.size() != n_ || x_target.size() != n_) {
    throw std::invalid_argument("endpoint dimension mismatch in plan");
  }
  Eigen::VectorXd endpoints(2 * n_);
  endpoints << x_init, x_target;
  const Eigen::VectorXd u = input_gain_ * endpoints;
  StateSequence inputs(T_ - 1);
  for (int t = 0; t < T_ - 1; ++t) inputs[t] = u.segment(t * m_, m_);
  return inputs;
}

StateSequence lqr_plan(const LinearSystem& sys, const Eigen::VectorXd& x_init,
                       const Eigen::VectorXd& x_target, int horizon,
                       double state_weight) {
  return LqrPlanner(sys, horizon, state_weight).plan(x_init, x_target);
}

Eigen::VectorXd stack_states(const StateSequence& states) {
  if (states.empty()) throw std::invalid_argument("cannot stack an empty sequence");
  const Eigen::Index n = states.front().size();
  Eigen::VectorXd out(n * static_cast<Eigen::Index>(states.size()));
  for (std::size_t t = 0; t < states.size(); ++t) {
    if (states[t].size() != n) {
      throw std::invalid_argument("all states must share one dimension");
    }
    out.segment(static_cast<Eigen::Index>(t) * n, n) = states[t];
  }
  return out;
}

StateSequence unstack_states(const Eigen::VectorXd& stacked, int state_dim) {
  if (state_dim < 1 || stacked.size() % state_dim != 0) {
    throw std::invalid_argument("stacked length must be a multiple of the state dimension");
  }
  const int T = static_cast<int>(stacked.size()) / state_dim;
  StateSequence out(T);
  for (int t = 0; t < T; ++t) out[t] = stacked.segment(t * state_dim, state_dim);
  return out;
}

LinearSystem quadrotor_like_model(double sample_time) {
  if (sample_time <= 0.0) {
    throw std::invalid_argument("sample time must be positive");
  }
  const double ts = sample_time;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(6, 6);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6, 3);
  for (int axis = 0; axis < 3; ++axis) {
    A(axis, axis + 3) = ts;
    B(axis, axis) = 0.5 * ts * ts;
    B(axis + 3, axis) = ts;
  }
  return LinearSystem(std::move(A), std::move(B));
}

}  // namespace distortia
