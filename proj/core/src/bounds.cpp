#include "distortia/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace distortia {
namespace {

bool noiseless(const LinearSystem& sys) {
  return sys.process_noise_cov.size() == 0 || sys.process_noise_cov.isZero(0.0);
}

double lambda_min_btb(const Eigen::MatrixXd& B) {
  if (B.cols() == 0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B.transpose() * B);
  return std::max(0.0, eig.eigenvalues().minCoeff());
}

// Powers of A applied to B: ab[p] = A^p B.
std::vector<Eigen::MatrixXd> input_maps(const LinearSystem& sys, int T) {
  std::vector<Eigen::MatrixXd> ab(T);
  ab[0] = sys.B;
  for (int p = 1; p < T; ++p) ab[p] = sys.A * ab[p - 1];
  return ab;
}

struct Welford {
  double mean = 0.0;
  double m2 = 0.0;
  std::int64_t count = 0;

  void add(double value) {
    ++count;
    const double delta = value - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (value - mean);
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

}  // namespace

PhiEstimate phi_condition(const LinearSystem& sys, const TrajectoryLaw& input_law,
                          const TrajectoryEncoder& encode,
                          const TrajectoryPosterior& posterior,
                          std::int64_t num_samples, std::uint64_t seed) {
  if (num_samples < 2) throw std::invalid_argument("need at least two samples");
  if (!noiseless(sys)) {
    throw std::invalid_argument("the translation applies to noiseless plants only");
  }
  if (input_law.state_dim() != sys.input_dim()) {
    throw std::invalid_argument("input law dimension does not match the plant input");
  }
  const int T = input_law.horizon();
  const int m = sys.input_dim();
  const std::vector<Eigen::MatrixXd> ab = input_maps(sys, T);
  // w[p][q] = (A^q B)' (A^p B) for q < p, the trace weight of the pair with
  // lags p = t - i and q = t - j.
  std::vector<std::vector<Eigen::MatrixXd>> w(T);
  for (int p = 1; p < T; ++p) {
    w[p].resize(p);
    for (int q = 0; q < p; ++q) w[p][q] = ab[q].transpose() * ab[p];
  }
  std::vector<Welford> acc(T);
  CounterRng traj_rng(seed, 0);
  CounterRng key_rng(seed, 1);
  for (std::int64_t s = 0; s < num_samples; ++s) {
    const StateSequence inputs = unstack_states(input_law.sample(traj_rng), m);
    const AmbiguitySet amb = posterior(encode(inputs, key_rng));
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(amb.candidates.front().size());
    for (int c = 0; c < amb.size(); ++c) mean += amb.weights[c] * amb.candidates[c];
    for (int t = 1; t <= T; ++t) {
      double total = 0.0;
      for (int j = 2; j <= t; ++j) {
        for (int i = 1; i < j; ++i) {
          const Eigen::MatrixXd& weight = w[t - i][t - j];
          for (int c = 0; c < amb.size(); ++c) {
            const Eigen::VectorXd di =
                amb.candidates[c].segment(static_cast<Eigen::Index>(i - 1) * m, m) -
                mean.segment(static_cast<Eigen::Index>(i - 1) * m, m);
            const Eigen::VectorXd dj =
                amb.candidates[c].segment(static_cast<Eigen::Index>(j - 1) * m, m) -
                mean.segment(static_cast<Eigen::Index>(j - 1) * m, m);
            total += amb.weights[c] * dj.dot(weight * di);
          }
        }
      }
      acc[t - 1].add(total);
    }
  }
  PhiEstimate out;
  out.estimates.resize(T);
  out.std_errors.resize(T);
  out.holds = true;
  for (int t = 0; t < T; ++t) {
    out.estimates[t] = acc[t].mean;
    out.std_errors[t] = acc[t].std_error();
    if (out.estimates[t] < -3.0 * out.std_errors[t]) out.holds = false;
  }
  return out;
}

double state_bound(double D_U, const Eigen::MatrixXd& B) {
  if (D_U < 0.0) throw std::invalid_argument("distortion must be nonnegative");
  return lambda_min_btb(B) * D_U;
}

BoundReport verify_bound_empirically(const LinearSystem& sys,
                                     const TrajectoryLaw& input_law,
                                     const TrajectoryEncoder& encode,
                                     const TrajectoryPosterior& posterior,
                                     std::int64_t num_samples, std::uint64_t seed) {
  if (num_samples < 2) throw std::invalid_argument("need at least two samples");
  BoundReport report;
  report.cert.phi = phi_condition(sys, input_law, encode, posterior, num_samples, seed);
  report.cert.condition_holds = report.cert.phi.holds;
  report.cert.lambda_min = lambda_min_btb(sys.B);
  if (!report.cert.condition_holds) {
    report.diagnostics =
        "cross-term condition failed: a per-time estimate fell below -3 std errors; "
        "the input-to-state translation does not apply";
    return report;
  }
  const int T = input_law.horizon();
  const int m = sys.input_dim();
  const int n = sys.state_dim();
  const std::vector<Eigen::MatrixXd> ab = input_maps(sys, T);
  // Unrolled dynamics from X_0 = 0: stacked states = L * stacked inputs.
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) * T,
                                            static_cast<Eigen::Index>(m) * T);
  for (int t = 1; t <= T; ++t) {
    for (int i = 1; i <= t; ++i) {
      L.block(static_cast<Eigen::Index>(n) * (t - 1),
              static_cast<Eigen::Index>(m) * (i - 1), n, m) = ab[t - i];
    }
  }
  Welford input_avg;
  Welford state_avg;
  double input_min = std::numeric_limits<double>::infinity();
  double state_min = std::numeric_limits<double>::infinity();
  CounterRng traj_rng(seed, 2);
  CounterRng key_rng(seed, 3);
  for (std::int64_t s = 0; s < num_samples; ++s) {
    const StateSequence inputs = unstack_states(input_law.sample(traj_rng), m);
    const AmbiguitySet amb_u = posterior(encode(inputs, key_rng));
    std::vector<Eigen::VectorXd> mapped(amb_u.candidates.size());
    for (std::size_t c = 0; c < mapped.size(); ++c) mapped[c] = L * amb_u.candidates[c];
    const AmbiguitySet amb_x(std::move(mapped), amb_u.weights, T);
    double sum_u = 0.0;
    double sum_x = 0.0;
    for (int t = 0; t < T; ++t) {
      const double du = conditional_distortion(amb_u, t);
      const double dx = conditional_distortion(amb_x, t);
      sum_u += du;
      sum_x += dx;
      input_min = std::min(input_min, du);
      state_min = std::min(state_min, dx);
    }
    input_avg.add(sum_u / T);
    state_avg.add(sum_x / T);
  }
  report.cert.D_E_U = input_avg.mean;
  report.cert.D_E_U_std_error = input_avg.std_error();
  report.cert.D_W_U = input_min;
  report.D_E_X = state_avg.mean;
  report.D_E_X_std_error = state_avg.std_error();
  report.D_W_X = state_min;
  report.bound_E = state_bound(report.cert.D_E_U, sys.B);
  report.bound_W = state_bound(report.cert.D_W_U, sys.B);
  // Worst-case minima carry no per-sample error bars of their own, so both
  // comparisons borrow the average-case noise scale for slack.
  const double slack =
      3.0 * (report.D_E_X_std_error + report.cert.lambda_min * report.cert.D_E_U_std_error);
  const bool avg_ok = report.D_E_X >= report.bound_E - slack;
  const bool worst_ok = report.D_W_X >= report.bound_W - slack;
  report.certified = avg_ok && worst_ok;
  if (!report.certified) {
    report.diagnostics = "measured state-side distortion fell below the translated bound";
  }
  return report;
}

}  // namespace distortia
