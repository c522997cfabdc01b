#include "ilqgame/dynamics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ilqgame/errors.h"
#include "test_util.h"

namespace ilqgame {
namespace {

using testing::fd_jacobian;
using testing::relative_error;

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  Index k = 0;
  for (double d : v) out(k++) = d;
  return out;
}

TEST(PlayerModel, UnicycleStraightLine) {
  const MultiPlayerSystem sys({PlayerModel::unicycle()});
  const VectorXd xdot = sys.evaluate(0.0, vec({0, 0, 0, 1}), {vec({0, 0})});
  EXPECT_TRUE(xdot.isApprox(vec({1, 0, 0, 0})));
}

TEST(PlayerModel, DubinsHeadingUp) {
  const MultiPlayerSystem sys({PlayerModel::dubins(1.0)});
  const VectorXd xdot =
      sys.evaluate(0.0, vec({0, 0, std::numbers::pi / 2}), {vec({0})});
  EXPECT_NEAR(xdot(0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(xdot(1), 1.0);
  EXPECT_DOUBLE_EQ(xdot(2), 0.0);
}

TEST(PlayerModel, BicycleStraightWheels) {
  const MultiPlayerSystem sys({PlayerModel::bicycle(1.0)});
  const VectorXd xdot = sys.evaluate(0.0, vec({0, 0, 0, 0, 2}), {vec({0, 0})});
  EXPECT_TRUE(xdot.isApprox(vec({2, 0, 0, 0, 0})));
}

TEST(PlayerModel, RejectsBadParameters) {
  EXPECT_THROW(PlayerModel::bicycle(0.0), InvalidArgument);
  EXPECT_THROW(PlayerModel::dubins(-1.0), InvalidArgument);
  EXPECT_THROW(MultiPlayerSystem({}), InvalidArgument);
}

TEST(MultiPlayerSystem, LayoutIsPlayerMajor) {
  const MultiPlayerSystem sys({PlayerModel::bicycle(2.0),
                               PlayerModel::bicycle(2.0),
                               PlayerModel::unicycle()});
  EXPECT_EQ(sys.state_dim(), 14);
  EXPECT_EQ(sys.state_offset(0), 0);
  EXPECT_EQ(sys.state_offset(1), 5);
  EXPECT_EQ(sys.state_offset(2), 10);
  EXPECT_EQ(sys.control_dim(2), 2);
}

TEST(MultiPlayerSystem, DimensionMismatchNamesPlayer) {
  const MultiPlayerSystem sys({PlayerModel::unicycle(), PlayerModel::dubins(1)});
  try {
    sys.evaluate(0.0, VectorXd::Zero(7), {vec({0, 0}), vec({0, 0})});
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("player 1"), std::string::npos);
  }
  EXPECT_THROW(sys.evaluate(0.0, VectorXd::Zero(6), {vec({0, 0}), vec({0})}),
               InvalidArgument);
}

TEST(MultiPlayerSystem, EvaluationConcatenatesPlayers) {
  const MultiPlayerSystem sys({PlayerModel::unicycle(), PlayerModel::dubins(2)});
  const VectorXd x = vec({1, 2, 0.3, 1.5, -1, 0.5, 2.0});
  const ControlSet u = {vec({0.2, -0.1}), vec({0.7})};
  const VectorXd xdot = sys.evaluate(0.0, x, u);
  EXPECT_TRUE(xdot.head(4).isApprox(
      sys.player(0).evaluate(x.head(4), u[0])));
  EXPECT_TRUE(xdot.tail(3).isApprox(
      sys.player(1).evaluate(x.tail(3), u[1])));
}

TEST(IntegrateStep, StraightLineIsExact) {
  const MultiPlayerSystem sys({PlayerModel::unicycle()});
  const VectorXd next =
      integrate_step(sys, 0.0, vec({0, 0, 0, 1}), {vec({0, 0})}, 0.1);
  EXPECT_NEAR((next - vec({0.1, 0, 0, 1})).lpNorm<Eigen::Infinity>(), 0.0,
              1e-15);
}

TEST(IntegrateStep, ConstantTurnMatchesClosedFormArc) {
  // Unit speed, unit yaw rate: p(t) = (sin t, 1 - cos t), theta = t.
  const MultiPlayerSystem sys({PlayerModel::unicycle()});
  const VectorXd next =
      integrate_step(sys, 0.0, vec({0, 0, 0, 1}), {vec({1, 0})}, 0.1);
  const VectorXd expected = vec({std::sin(0.1), 1 - std::cos(0.1), 0.1, 1});
  EXPECT_LT((next - expected).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(IntegrateStep, TaylorConsistency) {
  const MultiPlayerSystem sys({PlayerModel::bicycle(2.0)});
  const VectorXd x = vec({1, -1, 0.4, 0.1, 3});
  const ControlSet u = {vec({0.3, -0.5})};
  const VectorXd f = sys.evaluate(0, x, u);
  double prev = 0.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const double err = (integrate_step(sys, 0, x, u, dt) - x - dt * f).norm();
    if (prev > 0) EXPECT_NEAR(prev / err, 4.0, 0.2);
    prev = err;
  }
}

TEST(IntegrateStep, RejectsNonFiniteInput) {
  const MultiPlayerSystem sys({PlayerModel::unicycle()});
  EXPECT_THROW(integrate_step(sys, 0, vec({0, NAN, 0, 1}), {vec({0, 0})}, 0.1),
               NumericalInputError);
  EXPECT_THROW(
      integrate_step(sys, 0, vec({0, 0, 0, 1}), {vec({INFINITY, 0})}, 0.1),
      NumericalInputError);
  EXPECT_THROW(integrate_step(sys, 0, vec({0, 0, 0, 1}), {vec({0, 0})}, 0.0),
               InvalidArgument);
}

TEST(IntegrateStep, FourthOrderConvergence) {
  const MultiPlayerSystem sys({PlayerModel::bicycle(1.5),
                               PlayerModel::unicycle(), PlayerModel::dubins(1)});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd x(12);
    for (Index k = 0; k < 12; ++k) x(k) = U(rng);
    x(4) = 2.0 + U(rng);
    x(8) = 1.0 + U(rng);
    const ControlSet u = {vec({U(rng), U(rng)}), vec({U(rng), U(rng)}),
                          vec({U(rng)})};
    const double dt = 0.4;
    auto reference = [&](double h) {
      VectorXd y = x;
      const double fine = h / 100.0;
      for (int s = 0; s < 100; ++s) y = integrate_step(sys, 0, y, u, fine);
      return y;
    };
    const double e1 = (integrate_step(sys, 0, x, u, dt) - reference(dt)).norm();
    const double e2 =
        (integrate_step(sys, 0, x, u, dt / 2) - reference(dt / 2)).norm();
    EXPECT_GE(e1 / e2, 14.0) << "trial " << trial;
  }
}

TEST(Linearize, UnicycleAtHeadingZero) {
  const MultiPlayerSystem sys({PlayerModel::unicycle()});
  const Linearization lin = sys.linearize(0, vec({0, 0, 0, 1}), {vec({0, 0})});
  MatrixXd A = MatrixXd::Zero(4, 4);
  A(0, 3) = 1.0;
  A(1, 2) = 1.0;
  EXPECT_TRUE(lin.A.isApprox(A));
  MatrixXd B = MatrixXd::Zero(4, 2);
  B(2, 0) = 1.0;
  B(3, 1) = 1.0;
  EXPECT_TRUE(lin.B[0].isApprox(B));

  const auto f = [&](const VectorXd& x) {
    return sys.evaluate(0, x, {vec({0, 0})});
  };
  EXPECT_LT(relative_error(lin.A, fd_jacobian(f, vec({0, 0, 0, 1}))), 1e-5);
}

TEST(Linearize, DubinsStructure) {
  const MultiPlayerSystem sys({PlayerModel::dubins(1.3)});
  const Linearization lin = sys.linearize(0, vec({1, 2, 0.7}), {vec({0.2})});
  EXPECT_EQ(lin.A.rows(), 3);
  EXPECT_EQ(lin.A.cols(), 3);
  ASSERT_EQ(lin.B[0].rows(), 3);
  ASSERT_EQ(lin.B[0].cols(), 1);
  EXPECT_EQ(lin.B[0](0, 0), 0.0);
  EXPECT_EQ(lin.B[0](1, 0), 0.0);
  EXPECT_EQ(lin.B[0](2, 0), 1.0);
}

// Analytic Jacobians against central differences at random points.
TEST(Linearize, MatchesFiniteDifferences) {
  const MultiPlayerSystem sys({PlayerModel::unicycle(),
                               PlayerModel::bicycle(2.5),
                               PlayerModel::dubins(1.2)});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> phi(-0.6, 0.6);
  std::uniform_real_distribution<double> speed(0.0, 10.0);
  std::uniform_real_distribution<double> ctrl(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    VectorXd x(12);
    x << pos(rng), pos(rng), ang(rng), speed(rng), pos(rng), pos(rng),
        ang(rng), phi(rng), speed(rng), pos(rng), pos(rng), ang(rng);
    const ControlSet u = {vec({ctrl(rng), ctrl(rng)}),
                          vec({ctrl(rng), ctrl(rng)}), vec({ctrl(rng)})};
    const double t = 0.1 * trial;
    const Linearization lin = sys.linearize(t, x, u);
    const auto fx = [&](const VectorXd& y) { return sys.evaluate(t, y, u); };
    ASSERT_LT(relative_error(lin.A, fd_jacobian(fx, x)), 1e-5) << trial;
    for (PlayerIndex i = 0; i < 3; ++i) {
      const auto fu = [&](const VectorXd& ui) {
        ControlSet v = u;
        v[i] = ui;
        return sys.evaluate(t, x, v);
      };
      ASSERT_LT(relative_error(lin.B[i], fd_jacobian(fu, u[i])), 1e-5);
    }
  }
}

TEST(Linearize, PlayersAreDecoupled) {
  const MultiPlayerSystem sys({PlayerModel::unicycle(), PlayerModel::unicycle()});
  const VectorXd x = vec({0, 0, 0.1, 1, 3, 3, 2.0, 0.5});
  const VectorXd base = sys.evaluate(0, x, {vec({0.1, 0.2}), vec({0.3, 0.4})});
  const VectorXd perturbed =
      sys.evaluate(0, x, {vec({0.1, 0.2}), vec({-5.0, 9.0})});
  EXPECT_EQ(base.head(4), perturbed.head(4));
  const Linearization lin = sys.linearize(0, x, {vec({0, 0}), vec({0, 0})});
  EXPECT_TRUE(lin.B[1].topRows(4).isZero(0.0));
  EXPECT_TRUE(lin.A.topRightCorner(4, 4).isZero(0.0));
}

TEST(Integrate, Deterministic) {
  const MultiPlayerSystem sys({PlayerModel::bicycle(1.0), PlayerModel::dubins(2)});
  const VectorXd x = vec({0.1, 0.2, 0.3, 0.4, 0.5, 1, 2, 3});
  const ControlSet u = {vec({0.3, 0.1}), vec({-0.2})};
  const VectorXd a = integrate_step(sys, 0.2, x, u, 0.1);
  const VectorXd b = integrate_step(sys, 0.2, x, u, 0.1);
  EXPECT_EQ(a, b);
}

TEST(Discretize, Examples) {
  Linearization zero{MatrixXd::Zero(2, 2), {MatrixXd::Zero(2, 1)}};
  EXPECT_EQ(discretize(zero, 0.1).A, MatrixXd::Identity(2, 2));

  Linearization scalar{MatrixXd::Constant(1, 1, 2.0), {MatrixXd::Ones(1, 1)}};
  EXPECT_DOUBLE_EQ(discretize(scalar, 0.1).A(0, 0), 1.2);

  Linearization b{MatrixXd::Zero(2, 2), {vec({1, 0})}};
  EXPECT_TRUE(discretize(b, 0.1).B[0].isApprox(vec({0.1, 0})));
  EXPECT_THROW(discretize(b, 0.0), InvalidArgument);
}

TEST(TimeDiscretization, StepCount) {
  EXPECT_EQ(TimeDiscretization(0.1, 10.0).num_steps(), 100u);
  EXPECT_EQ(TimeDiscretization(0.1, 5.0).num_steps(), 50u);
  EXPECT_THROW(TimeDiscretization(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(TimeDiscretization(1.0, 0.2), InvalidArgument);
}

}  // namespace
}  // namespace ilqgame
