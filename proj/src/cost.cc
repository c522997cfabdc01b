#include "ilqgame/cost.h"

#include <cmath>
#include <string>

#include "ilqgame/dynamics.h"
#include "ilqgame/errors.h"

namespace ilqgame {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Point2 position(const VectorXd& x, const PlayerLayout& layout) {
  return {x(layout.px), x(layout.py)};
}

// Accumulates weighted contributions into a QuadraticCostApprox.
class Accumulator {
 public:
  Accumulator(QuadraticCostApprox& q, double weight) : q_(q), w_(weight) {}

  void grad(Index i, double g) { q_.l(i) += w_ * g; }
  void hess(Index i, Index j, double h) { q_.Q(i, j) += w_ * h; }

  // Position-block gradient and Hessian for a player's (px, py).
  void position_grad(const PlayerLayout& L, const Point2& g) {
    grad(L.px, g.x());
    grad(L.py, g.y());
  }
  void position_hess(const PlayerLayout& a, const PlayerLayout& b,
                     const Eigen::Matrix2d& H) {
    const Index ia[2] = {a.px, a.py};
    const Index ib[2] = {b.px, b.py};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) hess(ia[r], ib[c], H(r, c));
  }

 private:
  QuadraticCostApprox& q_;
  double w_;
};

void require_speed(const PlayerLayout& layout, const char* what) {
  if (layout.speed < 0)
    throw InvalidArgument(std::string(what) +
                          " cost on a player without a speed state");
}

}  // namespace

std::vector<PlayerLayout> layouts_of(const MultiPlayerSystem& system) {
  std::vector<PlayerLayout> layouts;
  for (PlayerIndex i = 0; i < system.num_players(); ++i) {
    const auto& model = system.player(i);
    const Index o = system.state_offset(i);
    PlayerLayout L;
    L.px = o + PlayerModel::kPx;
    L.py = o + PlayerModel::kPy;
    L.speed = model.speed_index() < 0 ? -1 : o + model.speed_index();
    L.control_dim = model.control_dim();
    layouts.push_back(L);
  }
  return layouts;
}

std::string kind_name(const CostTerm& term) {
  return std::visit(
      Overloaded{[](const WallCost&) { return "wall"; },
                 [](const ProximityCost&) { return "proximity"; },
                 [](const GoalCost&) { return "goal"; },
                 [](const ControlCost&) { return "control"; },
                 [](const LaneCenterCost&) { return "lane_center"; },
                 [](const LaneBoundaryCost&) { return "lane_boundary"; },
                 [](const NominalSpeedCost&) { return "nominal_speed"; },
                 [](const SpeedBoundsCost&) { return "speed_bounds"; }},
      term);
}

PlayerCost::PlayerCost(PlayerIndex owner, std::vector<CostPrimitive> primitives,
                       std::vector<PlayerLayout> layouts, Index state_dim,
                       Time horizon, double state_regularization,
                       double control_regularization)
    : owner_(owner),
      primitives_(std::move(primitives)),
      layouts_(std::move(layouts)),
      state_dim_(state_dim),
      horizon_(horizon),
      eps_q_(state_regularization),
      eps_r_(control_regularization) {
  const std::string who = "player " + std::to_string(owner) + " cost: ";
  if (owner_ >= layouts_.size())
    throw InvalidArgument(who + "owner index out of range");
  if (primitives_.empty())
    throw InvalidArgument(who + "needs at least one primitive");
  if (!(eps_q_ >= 0.0) || !(eps_r_ >= 0.0))
    throw InvalidArgument(who + "regularization must be nonnegative");
  if (!(horizon_ > 0.0)) throw InvalidArgument(who + "horizon must be positive");
  for (const auto& L : layouts_) {
    if (L.px < 0 || L.px >= state_dim_ || L.py < 0 || L.py >= state_dim_ ||
        L.speed >= state_dim_)
      throw InvalidArgument(who + "layout index outside the state");
  }

  const PlayerLayout& self = layouts_[owner_];
  for (const auto& p : primitives_) {
    if (!(p.weight >= 0.0) || !std::isfinite(p.weight))
      throw InvalidArgument(who + "weight must be nonnegative");
    std::visit(
        Overloaded{
            [&](const WallCost& c) {
              if (!(c.half_width > 0.0))
                throw InvalidArgument(who + "wall half width must be positive");
            },
            [&](const ProximityCost& c) {
              if (!(c.threshold > 0.0))
                throw InvalidArgument(who +
                                      "proximity threshold must be positive");
              if (c.other >= layouts_.size() || c.other == owner_)
                throw InvalidArgument(who + "proximity references player " +
                                      std::to_string(c.other));
            },
            [&](const GoalCost& c) {
              if (!(c.window >= 0.0))
                throw InvalidArgument(who + "goal window must be nonnegative");
            },
            [&](const ControlCost& c) {
              const PlayerIndex j = c.player.value_or(owner_);
              if (j >= layouts_.size())
                throw InvalidArgument(who + "control cost references player " +
                                      std::to_string(j));
              if (c.diagonal.size() != layouts_[j].control_dim)
                throw InvalidArgument(who + "control weights have dimension " +
                                      std::to_string(c.diagonal.size()) +
                                      ", expected " +
                                      std::to_string(layouts_[j].control_dim));
              if (!(c.diagonal.array() > 0.0).all())
                throw InvalidArgument(who + "control weights must be positive");
            },
            [&](const LaneCenterCost& c) {
              if (c.lane.points().size() < 2)
                throw InvalidArgument(who + "lane needs at least two points");
            },
            [&](const LaneBoundaryCost& c) {
              if (c.lane.points().size() < 2)
                throw InvalidArgument(who + "lane needs at least two points");
              if (!(c.half_width > 0.0))
                throw InvalidArgument(who + "lane half width must be positive");
            },
            [&](const NominalSpeedCost&) { require_speed(self, "nominal speed"); },
            [&](const SpeedBoundsCost& c) {
              require_speed(self, "speed bounds");
              if (!(c.lower <= c.upper))
                throw InvalidArgument(who + "speed bounds lower > upper");
            }},
        p.term);
  }
}

PlayerCost PlayerCost::with_regularization(double eps_q, double eps_r) const {
  PlayerCost copy = *this;
  if (!(eps_q >= 0.0) || !(eps_r >= 0.0))
    throw InvalidArgument("regularization must be nonnegative");
  copy.eps_q_ = eps_q;
  copy.eps_r_ = eps_r;
  return copy;
}

void PlayerCost::check(const VectorXd& x, const ControlSet& u) const {
  if (x.size() != state_dim_)
    throw InvalidArgument("cost evaluated on state of dimension " +
                          std::to_string(x.size()) + ", expected " +
                          std::to_string(state_dim_));
  if (u.size() != layouts_.size())
    throw InvalidArgument("cost evaluated with controls for " +
                          std::to_string(u.size()) + " players");
  for (PlayerIndex j = 0; j < u.size(); ++j)
    if (u[j].size() != layouts_[j].control_dim)
      throw InvalidArgument("player " + std::to_string(j) +
                            " control has wrong dimension");
}

double PlayerCost::evaluate(Time t, const VectorXd& x,
                            const ControlSet& u) const {
  check(x, u);
  const PlayerLayout& self = layouts_[owner_];
  double total = 0.0;
  for (const auto& prim : primitives_) {
    const double g = std::visit(
        Overloaded{
            [&](const WallCost& c) {
              const double a = std::abs(x(self.py));
              return a > c.half_width ? (a - c.half_width) * (a - c.half_width)
                                      : 0.0;
            },
            [&](const ProximityCost& c) {
              const double r =
                  (position(x, self) - position(x, layouts_[c.other])).norm();
              return r < c.threshold ? (c.threshold - r) * (c.threshold - r)
                                     : 0.0;
            },
            [&](const GoalCost& c) {
              return t > horizon_ - c.window
                         ? (position(x, self) - c.goal).squaredNorm()
                         : 0.0;
            },
            [&](const ControlCost& c) {
              const VectorXd& uj = u[c.player.value_or(owner_)];
              return uj.dot(c.diagonal.cwiseProduct(uj));
            },
            [&](const LaneCenterCost& c) {
              const double d = c.lane.closest(position(x, self)).distance;
              return d * d;
            },
            [&](const LaneBoundaryCost& c) {
              const double d = c.lane.closest(position(x, self)).distance;
              return d > c.half_width ? (d - c.half_width) * (d - c.half_width)
                                      : 0.0;
            },
            [&](const NominalSpeedCost& c) {
              const double e = x(self.speed) - c.reference;
              return e * e;
            },
            [&](const SpeedBoundsCost& c) {
              const double v = x(self.speed);
              if (v > c.upper) return (v - c.upper) * (v - c.upper);
              if (v < c.lower) return (c.lower - v) * (c.lower - v);
              return 0.0;
            }},
        prim.term);
    total += prim.weight * g;
  }
  return total;
}

QuadraticCostApprox PlayerCost::quadraticize(Time t, const VectorXd& x,
                                             const ControlSet& u) const {
  check(x, u);
  const PlayerLayout& self = layouts_[owner_];
  QuadraticCostApprox q;
  q.Q = MatrixXd::Zero(state_dim_, state_dim_);
  q.l = VectorXd::Zero(state_dim_);
  for (const auto& L : layouts_) {
    q.R.push_back(MatrixXd::Zero(L.control_dim, L.control_dim));
    q.r.push_back(VectorXd::Zero(L.control_dim));
  }

  const Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();
  for (const auto& prim : primitives_) {
    Accumulator acc(q, prim.weight);
    std::visit(
        Overloaded{
            [&](const WallCost& c) {
              const double y = x(self.py);
              const double a = std::abs(y);
              if (a <= c.half_width) return;
              acc.grad(self.py, 2.0 * (a - c.half_width) * (y > 0 ? 1.0 : -1.0));
              acc.hess(self.py, self.py, 2.0);
            },
            [&](const ProximityCost& c) {
              const PlayerLayout& other = layouts_[c.other];
              const Point2 delta = position(x, self) - position(x, other);
              const double r = delta.norm();
              if (r >= c.threshold) return;
              if (r == 0.0)
                throw DegenerateGeometryError(
                    "proximity cost between coincident players " +
                    std::to_string(owner_) + " and " +
                    std::to_string(c.other));
              const Point2 n = delta / r;
              const double gap = c.threshold - r;
              const Point2 g = -2.0 * gap * n;
              const Eigen::Matrix2d H =
                  2.0 * n * n.transpose() - 2.0 * gap / r * (I2 - n * n.transpose());
              acc.position_grad(self, g);
              acc.position_grad(other, -g);
              acc.position_hess(self, self, H);
              acc.position_hess(other, other, H);
              acc.position_hess(self, other, -H);
              acc.position_hess(other, self, -H);
            },
            [&](const GoalCost& c) {
              if (!(t > horizon_ - c.window)) return;
              acc.position_grad(self, 2.0 * (position(x, self) - c.goal));
              acc.position_hess(self, self, 2.0 * I2);
            },
            [&](const ControlCost& c) {
              const PlayerIndex j = c.player.value_or(owner_);
              q.r[j] += prim.weight * 2.0 * c.diagonal.cwiseProduct(u[j]);
              q.R[j].diagonal() += prim.weight * 2.0 * c.diagonal;
            },
            [&](const LaneCenterCost& c) {
              const Point2 p = position(x, self);
              const auto cp = c.lane.closest(p);
              if (cp.ambiguous || (cp.at_interior_vertex && cp.distance == 0.0))
                throw DegenerateGeometryError(
                    "lane centerline distance evaluated at a polyline kink");
              acc.position_grad(self, 2.0 * (p - cp.point));
              if (cp.at_vertex) {
                acc.position_hess(self, self, 2.0 * I2);
              } else {
                const Point2 dir = c.lane.direction(cp.segment);
                const Point2 normal(-dir.y(), dir.x());
                acc.position_hess(self, self, 2.0 * normal * normal.transpose());
              }
            },
            [&](const LaneBoundaryCost& c) {
              const Point2 p = position(x, self);
              const auto cp = c.lane.closest(p);
              if (cp.distance <= c.half_width) return;
              if (cp.ambiguous)
                throw DegenerateGeometryError(
                    "lane boundary distance evaluated at a polyline kink");
              const double d = cp.distance;
              const Point2 n = (p - cp.point) / d;
              const double excess = d - c.half_width;
              acc.position_grad(self, 2.0 * excess * n);
              Eigen::Matrix2d H = 2.0 * n * n.transpose();
              if (cp.at_vertex) H += 2.0 * excess / d * (I2 - n * n.transpose());
              acc.position_hess(self, self, H);
            },
            [&](const NominalSpeedCost& c) {
              acc.grad(self.speed, 2.0 * (x(self.speed) - c.reference));
              acc.hess(self.speed, self.speed, 2.0);
            },
            [&](const SpeedBoundsCost& c) {
              const double v = x(self.speed);
              if (v > c.upper) {
                acc.grad(self.speed, 2.0 * (v - c.upper));
                acc.hess(self.speed, self.speed, 2.0);
              } else if (v < c.lower) {
                acc.grad(self.speed, 2.0 * (v - c.lower));
                acc.hess(self.speed, self.speed, 2.0);
              }
            }},
        prim.term);
  }

  q.Q = 0.5 * (q.Q + q.Q.transpose()).eval();
  q.Q.diagonal().array() += eps_q_;
  for (auto& R : q.R) {
    R = 0.5 * (R + R.transpose()).eval();
    R.diagonal().array() += eps_r_;
  }
  return q;
}

double evaluate_total_cost(const PlayerCost& cost, const OperatingPoint& op,
                           Time dt) {
  if (op.controls.size() != op.states.size())
    throw InvalidArgument("operating point has mismatched state and control "
                          "sequence lengths");
  double total = 0.0;
  for (std::size_t k = 0; k < op.num_steps(); ++k)
    total += cost.evaluate(static_cast<Time>(k) * dt, op.states[k],
                           op.controls[k]);
  return total * dt;
}

OperatingPoint OperatingPoint::zeros(Index state_dim,
                                     const std::vector<Index>& control_dims,
                                     std::size_t num_steps, Time dt) {
  OperatingPoint op;
  op.dt = dt;
  op.states.assign(num_steps, VectorXd::Zero(state_dim));
  ControlSet u;
  for (Index m : control_dims) u.push_back(VectorXd::Zero(m));
  op.controls.assign(num_steps, u);
  return op;
}

}  // namespace ilqgame
