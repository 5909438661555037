#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <vector>

#include "distortia/adversary.hpp"
#include "distortia/dist_model.hpp"
#include "distortia/enc_mirror.hpp"
#include "distortia/enc_worstcase.hpp"
#include "distortia/lin_sys.hpp"
#include "distortia/rng.hpp"

namespace {

using namespace distortia;

void BM_Reflect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(1, n);
  S(0, 0) = 1.0;
  const MirrorPlane plane(S, Eigen::VectorXd::Zero(1));
  CounterRng rng(1);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(plane.reflect(x));
  }
}
BENCHMARK(BM_Reflect)->Arg(4)->Arg(64);

void BM_SmRoundTrip(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  const SMScheme scheme(bits, 4.84);
  const Key key((1u << bits) - 1, bits);
  double x = 0.37;
  for (auto _ : state) {
    const double z = sm_encode_scalar(x, scheme, key);
    benchmark::DoNotOptimize(sm_decode_scalar(z, scheme, key));
  }
}
BENCHMARK(BM_SmRoundTrip)->Arg(1)->Arg(3);

void BM_WorstCaseScan(benchmark::State& state) {
  const SMScheme scheme(static_cast<int>(state.range(0)), 4.84);
  const std::vector<double> grid = build_z_grid(scheme);
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_distortion(scheme, grid));
  }
}
BENCHMARK(BM_WorstCaseScan)->Arg(1)->Arg(3);

void BM_LqrPlan(benchmark::State& state) {
  const LinearSystem sys = quadrotor_like_model(0.5);
  const LqrPlanner planner(sys, 10, 10.0);
  Eigen::VectorXd from(6);
  Eigen::VectorXd to(6);
  from << -1.0, 0.2, -0.3, 0.0, 0.0, 0.0;
  to << 1.0, -0.4, 0.5, 0.0, 0.0, 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(planner.plan(from, to));
  }
}
BENCHMARK(BM_LqrPlan);

void BM_PosteriorKbit(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  const GaussianDist law(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd s1(1, 2);
  s1 << 1.0, 0.0;
  Eigen::MatrixXd s2(1, 2);
  s2 << 0.0, 1.0;
  std::vector<MirrorPlane> per_bit = {MirrorPlane(s1, Eigen::VectorXd::Zero(1))};
  if (bits > 1) per_bit.push_back(MirrorPlane(s2, Eigen::VectorXd::Zero(1)));
  const MirrorScheme scheme = MirrorScheme::repeated(per_bit, 1);
  Eigen::VectorXd x(2);
  x << 0.3, -0.7;
  const EncodedTrajectory z = encode_kbit({x}, scheme, Key(1, bits));
  for (auto _ : state) {
    benchmark::DoNotOptimize(posterior_kbit(law, z, scheme));
  }
}
BENCHMARK(BM_PosteriorKbit)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
