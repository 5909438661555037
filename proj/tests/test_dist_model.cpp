#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "distortia/dist_model.hpp"

using namespace distortia;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("density evaluation") {
  SUBCASE("standard normal at the origin") {
    GaussianDist dist(vec1(0), Eigen::MatrixXd::Identity(1, 1));
    CHECK(dist.density(vec1(0)) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  }

  SUBCASE("walk start is uniform on the lattice") {
    RandomWalkDist walk(1, 1);
    CHECK(walk.density(vec1(0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(walk.density(vec1(1)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(walk.density(vec1(2)) == 0.0);
  }

  SUBCASE("a single recorded trajectory has density one") {
    EmpiricalTrajectoryDist hist(0.2, Eigen::VectorXd::Zero(1), 2);
    hist.record(vec2(0.15, -0.31));
    CHECK(hist.density(vec2(0.15, -0.31)) == doctest::Approx(1.0));
    CHECK(hist.density(vec2(5.0, 5.0)) == 0.0);
  }
}

TEST_CASE("gaussian law details") {
  SUBCASE("deterministic quadrature reproduces the moments") {
    Eigen::MatrixXd cov(2, 2);
    cov << 1.3, 0.4, 0.4, 0.9;
    const Eigen::VectorXd mu = vec2(0.7, -1.1);
    GaussianDist dist(mu, cov);

    const double mass = dist.integrate_over_support(
        [&](const Eigen::VectorXd& x) { return dist.density(x); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

    for (int i = 0; i < 2; ++i) {
      const double mean_i = dist.integrate_over_support(
          [&](const Eigen::VectorXd& x) { return x(i) * dist.density(x); });
      CHECK(mean_i == doctest::Approx(mu(i)).epsilon(1e-8));
    }
    const double cross = dist.integrate_over_support([&](const Eigen::VectorXd& x) {
      return (x(0) - mu(0)) * (x(1) - mu(1)) * dist.density(x);
    });
    CHECK(cross == doctest::Approx(0.4).epsilon(1e-8));
  }

  SUBCASE("per-time moments slice the stacked blocks") {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
    cov(0, 0) = 2.0;
    cov(3, 3) = 5.0;
    Eigen::VectorXd mu(4);
    mu << 1, 2, 3, 4;
    GaussianDist dist(mu, cov, 2);
    TimeMoments m = dist.moments();
    REQUIRE(m.horizon() == 2);
    CHECK(m.mean[0](1) == doctest::Approx(2.0));
    CHECK(m.mean[1](0) == doctest::Approx(3.0));
    CHECK(m.cov[0](0, 0) == doctest::Approx(2.0));
    CHECK(m.cov[1](1, 1) == doctest::Approx(5.0));
  }

  SUBCASE("a zero-variance direction confines the law to its support") {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
    cov(0, 0) = 1.0;  // second coordinate is deterministic
    GaussianDist dist(vec2(0, 3), cov);
    CHECK(dist.rank() == 1);
    CHECK(dist.density(vec2(0, 3)) == doctest::Approx(0.3989422804014327));
    CHECK(dist.density(vec2(0, 3.5)) == 0.0);
    const double mass = dist.integrate_over_support(
        [&](const Eigen::VectorXd& x) { return dist.density(x); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("asymmetric covariance is rejected") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 0.2, 0.1, 1;
    CHECK_THROWS_AS(GaussianDist(vec2(0, 0), bad), std::invalid_argument);
  }
}

TEST_CASE("bounded walk law details") {
  SUBCASE("the pmf sums to one for every small configuration") {
    for (int a = 1; a <= 3; ++a) {
      for (int T = 1; T <= 6; ++T) {
        RandomWalkDist walk(a, T);
        double mass = 0.0;
        for (const auto& [x, p] : walk.enumerate()) mass += p;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("interior states step three ways, boundary states two") {
    RandomWalkDist walk(1, 2);
    auto mid = walk.kernel(0);
    REQUIRE(mid.size() == 3);
    CHECK(mid[1] == doctest::Approx(1.0 / 3.0));
    auto edge = walk.kernel(1);
    REQUIRE(edge.size() == 2);
    CHECK(edge[0] == doctest::Approx(0.5));
    CHECK(edge[1] == doctest::Approx(0.5));
  }

  SUBCASE("enumeration and the density agree") {
    RandomWalkDist walk(2, 3);
    for (const auto& [x, p] : walk.enumerate()) {
      CHECK(walk.density(x) == doctest::Approx(p).epsilon(1e-12));
    }
  }
}

TEST_CASE("point symmetry detection") {
  SUBCASE("every gaussian is symmetric about its mean") {
    CounterRng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXd root(2, 2);
      for (int i = 0; i < 4; ++i) root(i / 2, i % 2) = rng.uniform(-1, 1);
      Eigen::MatrixXd cov = root * root.transpose() + 0.1 * Eigen::MatrixXd::Identity(2, 2);
      Eigen::VectorXd mu = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
      auto sym = point_symmetry(GaussianDist(mu, cov));
      REQUIRE(sym.has_value());
      CHECK((sym->point - mu).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }

  SUBCASE("the walk is symmetric about the origin") {
    RandomWalkDist walk(1, 3);
    auto sym = point_symmetry(walk);
    REQUIRE(sym.has_value());
    CHECK(sym->point.lpNorm<Eigen::Infinity>() < 1e-12);
  }

  SUBCASE("one lone histogram bin certifies nothing") {
    EmpiricalTrajectoryDist hist(1.0, Eigen::VectorXd::Zero(1), 1);
    hist.record(vec1(1.0));
    CHECK(!point_symmetry(hist).has_value());
  }

  SUBCASE("a lopsided histogram is rejected") {
    EmpiricalTrajectoryDist hist(1.0, Eigen::VectorXd::Zero(1), 1);
    hist.record_key({0}, 100);
    hist.record_key({1}, 100);
    hist.record_key({2}, 50);
    CHECK(!point_symmetry(hist).has_value());
  }

  SUBCASE("a balanced histogram certifies its center") {
    EmpiricalTrajectoryDist hist(1.0, Eigen::VectorXd::Zero(1), 1);
    hist.record_key({-2}, 50);
    hist.record_key({-1}, 100);
    hist.record_key({0}, 100);
    hist.record_key({1}, 50);
    auto sym = point_symmetry(hist);
    REQUIRE(sym.has_value());
    CHECK(sym->point(0) == doctest::Approx(0.0));  // center between the -1 and 0 bins
  }
}

TEST_CASE("markov chain symmetry audit") {
  SUBCASE("the bounded walk passes") {
    CHECK(markov_symmetry_check(RandomWalkDist(1, 2)));
    CHECK(markov_symmetry_check(RandomWalkDist(2, 4)));
  }

  SUBCASE("one step reduces to initial-law symmetry") {
    CHECK(markov_symmetry_check(RandomWalkDist(1, 1)));
    FiniteMarkovChain biased;
    biased.initial = {{0, 0.6}, {1, 0.4}};
    biased.kernel = [](int s) { return std::map<int, double>{{s, 1.0}}; };
    biased.horizon = 1;
    CHECK(!markov_symmetry_check(biased));
  }

  SUBCASE("a drifting kernel fails even though each conditional is symmetric") {
    FiniteMarkovChain drift;
    drift.initial = {{-1, 0.5}, {1, 0.5}};
    drift.kernel = [](int s) { return std::map<int, double>{{s + 1, 1.0}}; };
    drift.horizon = 3;
    CHECK(!markov_symmetry_check(drift));
  }
}

TEST_CASE("symmetry survives affine maps") {
  SUBCASE("the image point is the affine image") {
    SymmetryPoint v{vec2(1, 1)};
    Eigen::MatrixXd M1 = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    SymmetryPoint image = affine_pushforward_symmetry(v, M1, vec2(3, 0));
    CHECK(image.point(0) == doctest::Approx(5.0));
    CHECK(image.point(1) == doctest::Approx(2.0));
  }

  SUBCASE("zero center maps through any linear part to zero") {
    SymmetryPoint v{vec2(0, 0)};
    Eigen::MatrixXd M1(2, 2);
    M1 << 3, -1, 2, 5;
    SymmetryPoint image = affine_pushforward_symmetry(v, M1, vec2(0, 0));
    CHECK(image.point.lpNorm<Eigen::Infinity>() == 0.0);
  }

  SUBCASE("a sampled pushforward is symmetric about the predicted point") {
    // Walk start (uniform on {-1,0,1}) mapped through x -> 2x + 3.
    RandomWalkDist walk(1, 1);
    Eigen::MatrixXd M1 = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const Eigen::VectorXd M2 = vec1(3.0);
    SymmetryPoint predicted =
        affine_pushforward_symmetry(point_symmetry(walk).value(), M1, M2);
    CHECK(predicted.point(0) == doctest::Approx(3.0));

    CounterRng rng(99);
    EmpiricalTrajectoryDist hist(1.0, vec1(0.5), 1);
    for (int i = 0; i < 30000; ++i) {
      hist.record(M1 * walk.sample(rng) + M2);
    }
    auto sym = point_symmetry(hist);
    REQUIRE(sym.has_value());
    // Bin centers sit on {1, 3, 5}; the detected point is the histogram mean.
    CHECK(sym->point(0) == doctest::Approx(predicted.point(0)).epsilon(0.02));
  }

  SUBCASE("dimension mismatch is rejected") {
    SymmetryPoint v{vec2(0, 0)};
    CHECK_THROWS_AS(affine_pushforward_symmetry(v, Eigen::MatrixXd::Identity(3, 3),
                                                Eigen::VectorXd::Zero(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("histogram bookkeeping") {
  SUBCASE("counts turn into densities") {
    EmpiricalTrajectoryDist hist(0.2, Eigen::VectorXd::Zero(1), 1);
    hist.record(vec1(0.05));
    hist.record(vec1(0.05));
    hist.record(vec1(1.0));
    CHECK(hist.total() == 3);
    CHECK(hist.density(vec1(0.05)) == doctest::Approx(2.0 / 3.0));
    CHECK(hist.density(vec1(1.0)) == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("bin indices floor against the origin") {
    EmpiricalTrajectoryDist hist(0.2, Eigen::VectorXd::Zero(1), 1);
    CHECK(hist.key_of(vec1(0.31))[0] == 1);
    CHECK(hist.key_of(vec1(-0.01))[0] == -1);
    CHECK(hist.key_of(vec1(0.0))[0] == 0);
  }

  SUBCASE("centers land back in their own bin") {
    EmpiricalTrajectoryDist hist(0.2, vec1(-0.3), 2);
    EmpiricalTrajectoryDist::Key key = {3, -7};
    Eigen::VectorXd center = hist.center_of(key);
    CHECK(hist.key_of(center) == key);
  }

  SUBCASE("shards merge by adding counts") {
    EmpiricalTrajectoryDist a(0.2, Eigen::VectorXd::Zero(1), 1);
    EmpiricalTrajectoryDist b(0.2, Eigen::VectorXd::Zero(1), 1);
    a.record(vec1(0.05));
    b.record(vec1(0.05));
    b.record(vec1(0.5));
    a.merge(b);
    CHECK(a.total() == 3);
    CHECK(a.density(vec1(0.05)) == doctest::Approx(2.0 / 3.0));

    EmpiricalTrajectoryDist mismatched(0.1, Eigen::VectorXd::Zero(1), 1);
    CHECK_THROWS_AS(a.merge(mismatched), std::invalid_argument);
  }

  SUBCASE("runs are binned on the selected coordinates only") {
    Trajectory run;
    run.states = {Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
    run.states[0] << 0.31, 99.0, -0.5;
    run.states[1] << 0.0, 99.0, 0.25;
    run.inputs = {Eigen::VectorXd::Zero(1)};
    auto hist = empirical_from_runs({run, run, run}, 0.2, vec2(0, 0), {0, 2});
    CHECK(hist.total() == 3);
    EmpiricalTrajectoryDist::Key expect = {1, -3, 0, 1};
    CHECK(hist.table().count(expect) == 1);
    CHECK(hist.table().at(expect) == 3);
  }
}
