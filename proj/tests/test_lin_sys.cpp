#include "doctest.h"

#include <stdexcept>

#include "distortia/lin_sys.hpp"
#include "distortia/rng.hpp"

using namespace distortia;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

}  // namespace

TEST_CASE("single plant transition") {
  SUBCASE("identity dynamics add state and input") {
    LinearSystem sys(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2));
    Eigen::VectorXd next = step(sys, vec2(1, 0), vec2(0, 1), Eigen::VectorXd::Zero(2));
    CHECK(next(0) == doctest::Approx(1.0));
    CHECK(next(1) == doctest::Approx(1.0));
  }

  SUBCASE("zero matrices pass the noise through") {
    LinearSystem sys(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2));
    Eigen::VectorXd next = step(sys, vec2(7, -2), vec2(4, 4), vec2(3, -1));
    CHECK(next(0) == doctest::Approx(3.0));
    CHECK(next(1) == doctest::Approx(-1.0));
  }

  SUBCASE("double integrator step by hand") {
    Eigen::MatrixXd A(2, 2);
    A << 1, 0.5, 0, 1;
    Eigen::MatrixXd B(2, 1);
    B << 0, 1;
    LinearSystem sys(A, B);
    Eigen::VectorXd next = step(sys, vec2(0, 2), vec1(1));
    CHECK(next(0) == doctest::Approx(1.0));
    CHECK(next(1) == doctest::Approx(3.0));
  }

  SUBCASE("dimension mismatches are rejected") {
    LinearSystem sys(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(step(sys, vec1(1), vec2(0, 0), Eigen::VectorXd::Zero(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(step(sys, vec2(1, 1), vec1(0), Eigen::VectorXd::Zero(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(step(sys, vec2(1, 1), vec2(0, 0), vec1(0)), std::invalid_argument);
  }

  SUBCASE("construction validates the shapes") {
    CHECK_THROWS_AS(LinearSystem(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(LinearSystem(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 1)),
                    std::invalid_argument);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1, 0, 0, -1;
    CHECK_THROWS_AS(LinearSystem(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 1),
                                 indefinite),
                    std::invalid_argument);
  }
}

TEST_CASE("rollout simulation") {
  SUBCASE("identity plant with zero inputs holds still") {
    LinearSystem sys(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2));
    StateSequence inputs(2, Eigen::VectorXd::Zero(2));
    Trajectory traj = simulate(sys, vec2(3, -4), inputs);
    REQUIRE(traj.horizon() == 3);
    for (const auto& x : traj.states) {
      CHECK(x(0) == doctest::Approx(3.0));
      CHECK(x(1) == doctest::Approx(-4.0));
    }
  }

  SUBCASE("scalar doubling gives a geometric run") {
    LinearSystem sys(Eigen::MatrixXd::Constant(1, 1, 2.0),
                     Eigen::MatrixXd::Constant(1, 1, 1.0));
    StateSequence inputs(2, Eigen::VectorXd::Zero(1));
    Trajectory traj = simulate(sys, vec1(1), inputs);
    REQUIRE(traj.horizon() == 3);
    CHECK(traj.states[0](0) == doctest::Approx(1.0));
    CHECK(traj.states[1](0) == doctest::Approx(2.0));
    CHECK(traj.states[2](0) == doctest::Approx(4.0));
  }

  SUBCASE("same seed reproduces the noisy run exactly") {
    LinearSystem sys(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                     Eigen::MatrixXd::Identity(2, 2));
    StateSequence inputs(5, Eigen::VectorXd::Zero(2));
    Trajectory a = simulate(sys, vec2(0, 0), inputs, 42);
    Trajectory b = simulate(sys, vec2(0, 0), inputs, 42);
    Trajectory c = simulate(sys, vec2(0, 0), inputs, 43);
    double diff_same = 0.0;
    double diff_other = 0.0;
    for (int t = 0; t < a.horizon(); ++t) {
      diff_same += (a.states[t] - b.states[t]).norm();
      diff_other += (a.states[t] - c.states[t]).norm();
    }
    CHECK(diff_same == 0.0);
    CHECK(diff_other > 0.0);
  }

  SUBCASE("noiseless runs satisfy the recursion they came from") {
    Eigen::MatrixXd A(2, 2);
    A << 0.9, 0.2, -0.1, 1.1;
    Eigen::MatrixXd B(2, 1);
    B << 0.3, 0.7;
    LinearSystem sys(A, B);
    CounterRng rng(5);
    StateSequence inputs;
    for (int t = 0; t < 6; ++t) inputs.push_back(vec1(rng.uniform(-1, 1)));
    Trajectory traj = simulate(sys, vec2(0.4, -0.2), inputs);
    for (int t = 0; t + 1 < traj.horizon(); ++t) {
      Eigen::VectorXd residual =
          traj.states[t + 1] - sys.A * traj.states[t] - sys.B * traj.inputs[t];
      CHECK(residual.lpNorm<Eigen::Infinity>() < 1e-9);
    }
  }
}

TEST_CASE("point to point planning") {
  LinearSystem scalar(Eigen::MatrixXd::Constant(1, 1, 1.0),
                      Eigen::MatrixXd::Constant(1, 1, 1.0));

  SUBCASE("zero endpoints plan zero effort") {
    StateSequence u = lqr_plan(scalar, vec1(0), vec1(0), 4, 10.0);
    REQUIRE(u.size() == 3);
    for (const auto& ut : u) CHECK(std::abs(ut(0)) < 1e-9);
  }

  SUBCASE("two-state horizon forces the single step") {
    StateSequence u = lqr_plan(scalar, vec1(0), vec1(5), 2, 0.0);
    REQUIRE(u.size() == 1);
    CHECK(u[0](0) == doctest::Approx(5.0));
  }

  SUBCASE("effort splits evenly when only the endpoint is constrained") {
    StateSequence u = lqr_plan(scalar, vec1(0), vec1(2), 3, 0.0);
    REQUIRE(u.size() == 2);
    CHECK(u[0](0) == doctest::Approx(1.0));
    CHECK(u[1](0) == doctest::Approx(1.0));
  }

  SUBCASE("planned inputs actually reach the target") {
    LinearSystem sys = quadrotor_like_model(0.5);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
    Eigen::VectorXd x1 = Eigen::VectorXd::Zero(6);
    x0(0) = -1.0;
    x1(0) = 1.0;
    x1(1) = 0.6;
    x1(2) = -0.3;
    StateSequence u = lqr_plan(sys, x0, x1, 10, 10.0);
    Trajectory traj = simulate(sys, x0, u);
    CHECK((traj.states.back() - x1).lpNorm<Eigen::Infinity>() < 1e-6);
  }

  SUBCASE("the plan is affine in the endpoints") {
    LinearSystem sys = quadrotor_like_model(0.5);
    LqrPlanner planner(sys, 10, 10.0);
    CounterRng rng(11);
    Eigen::VectorXd a0(6), a1(6), b0(6), b1(6);
    for (int i = 0; i < 6; ++i) {
      a0(i) = rng.uniform(-1, 1);
      a1(i) = rng.uniform(-1, 1);
      b0(i) = rng.uniform(-1, 1);
      b1(i) = rng.uniform(-1, 1);
    }
    const double alpha = 0.3;
    StateSequence ua = planner.plan(a0, a1);
    StateSequence ub = planner.plan(b0, b1);
    StateSequence umix = planner.plan(alpha * a0 + (1 - alpha) * b0,
                                      alpha * a1 + (1 - alpha) * b1);
    for (std::size_t t = 0; t < umix.size(); ++t) {
      Eigen::VectorXd expected = alpha * ua[t] + (1 - alpha) * ub[t];
      CHECK((umix[t] - expected).lpNorm<Eigen::Infinity>() < 1e-8);
    }
  }

  SUBCASE("an uncontrollable horizon is reported") {
    // B = 0 cannot move the state anywhere.
    LinearSystem stuck(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 1));
    CHECK_THROWS_AS(lqr_plan(stuck, vec2(0, 0), vec2(1, 0), 4, 0.0), std::runtime_error);
  }
}

TEST_CASE("stand-in vehicle model") {
  LinearSystem sys = quadrotor_like_model(0.5);

  SUBCASE("per-axis blocks match the discretization") {
    REQUIRE(sys.state_dim() == 6);
    REQUIRE(sys.input_dim() == 3);
    for (int axis = 0; axis < 3; ++axis) {
      CHECK(sys.A(axis, axis) == doctest::Approx(1.0));
      CHECK(sys.A(axis, axis + 3) == doctest::Approx(0.5));
      CHECK(sys.A(axis + 3, axis) == doctest::Approx(0.0));
      CHECK(sys.A(axis + 3, axis + 3) == doctest::Approx(1.0));
      CHECK(sys.B(axis, axis) == doctest::Approx(0.125));
      CHECK(sys.B(axis + 3, axis) == doctest::Approx(0.5));
    }
  }

  SUBCASE("axes stay decoupled") {
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        if (r % 3 != c % 3) {
          CHECK(sys.A(r, c) == 0.0);
        }
      }
      for (int c = 0; c < 3; ++c) {
        if (r % 3 != c) CHECK(sys.B(r, c) == 0.0);
      }
    }
  }

  SUBCASE("unit acceleration from rest advances half a meter at Ts=1") {
    LinearSystem unit = quadrotor_like_model(1.0);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
    u(0) = 1.0;
    Eigen::VectorXd next = step(unit, Eigen::VectorXd::Zero(6), u);
    CHECK(next(0) == doctest::Approx(0.5));
    CHECK(next(3) == doctest::Approx(1.0));
  }

  SUBCASE("sample time must be positive") {
    CHECK_THROWS_AS(quadrotor_like_model(0.0), std::invalid_argument);
  }
}

TEST_CASE("stacking round trip") {
  CounterRng rng(3);
  StateSequence states;
  for (int t = 0; t < 4; ++t) {
    Eigen::VectorXd x(3);
    for (int i = 0; i < 3; ++i) x(i) = rng.uniform(-5, 5);
    states.push_back(x);
  }
  Eigen::VectorXd stacked = stack_states(states);
  REQUIRE(stacked.size() == 12);
  StateSequence back = unstack_states(stacked, 3);
  REQUIRE(back.size() == states.size());
  for (std::size_t t = 0; t < states.size(); ++t) {
    CHECK((back[t] - states[t]).lpNorm<Eigen::Infinity>() == 0.0);
  }
  CHECK_THROWS_AS(unstack_states(stacked, 5), std::invalid_argument);
}
