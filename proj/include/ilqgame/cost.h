#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ilqgame/geometry.h"
#include "ilqgame/operating_point.h"
#include "ilqgame/types.h"

namespace ilqgame {

class MultiPlayerSystem;

// Where a player's position and speed live in the joint state, and how many
// controls the player has. speed is -1 when the player's speed is not a state.
struct PlayerLayout {
  Index px = 0;
  Index py = 1;
  Index speed = -1;
  Index control_dim = 0;
};

std::vector<PlayerLayout> layouts_of(const MultiPlayerSystem& system);

// Running-cost primitives. Unless stated otherwise each acts on the state of
// the player that owns the cost.

// 1{|py| > half_width} (|py| - half_width)^2
struct WallCost {
  double half_width = 0.75;
  bool operator==(const WallCost&) const = default;
};

// 1{|p - p_other| < threshold} (threshold - |p - p_other|)^2
struct ProximityCost {
  PlayerIndex other = 0;
  double threshold = 1.0;
  bool operator==(const ProximityCost&) const = default;
};

// 1{t > T - window} |p - goal|^2
struct GoalCost {
  Point2 goal = Point2::Zero();
  Time window = 1.0;
  bool operator==(const GoalCost&) const = default;
};

// u^T diag(weights) u on one player's control (the owner when unset).
struct ControlCost {
  VectorXd diagonal;
  std::optional<PlayerIndex> player;
  bool operator==(const ControlCost& o) const {
    return player == o.player && diagonal.size() == o.diagonal.size() &&
           diagonal == o.diagonal;
  }
};

// d_lane(p)^2, the squared distance to the lane centerline.
struct LaneCenterCost {
  Polyline2 lane;
  bool operator==(const LaneCenterCost&) const = default;
};

// 1{d_lane(p) > half_width} (half_width - d_lane(p))^2
struct LaneBoundaryCost {
  Polyline2 lane;
  double half_width = 1.0;
  bool operator==(const LaneBoundaryCost&) const = default;
};

// (v - reference)^2
struct NominalSpeedCost {
  double reference = 0.0;
  bool operator==(const NominalSpeedCost&) const = default;
};

// 1{v > upper} (v - upper)^2 + 1{v < lower} (lower - v)^2
struct SpeedBoundsCost {
  double lower = 0.0;
  double upper = 1.0;
  bool operator==(const SpeedBoundsCost&) const = default;
};

using CostTerm =
    std::variant<WallCost, ProximityCost, GoalCost, ControlCost,
                 LaneCenterCost, LaneBoundaryCost, NominalSpeedCost,
                 SpeedBoundsCost>;

struct CostPrimitive {
  double weight = 1.0;
  CostTerm term;
  bool operator==(const CostPrimitive&) const = default;
};

std::string kind_name(const CostTerm& term);

// Second-order expansion of one player's running cost at one time step:
//   g ~ g0 + 1/2 dx'Q dx + l'dx + sum_j (1/2 du_j'R_j du_j + r_j'du_j)
// Cross terms between x and u, and between different players' controls, are
// not represented.
struct QuadraticCostApprox {
  MatrixXd Q;
  VectorXd l;
  std::vector<MatrixXd> R;
  std::vector<VectorXd> r;
};

class PlayerCost {
 public:
  // `layouts` describes every player of the game; `horizon` is the T used by
  // goal activation windows.
  PlayerCost(PlayerIndex owner, std::vector<CostPrimitive> primitives,
             std::vector<PlayerLayout> layouts, Index state_dim, Time horizon,
             double state_regularization = 0.0,
             double control_regularization = 0.0);

  PlayerIndex owner() const { return owner_; }
  const std::vector<CostPrimitive>& primitives() const { return primitives_; }
  Time horizon() const { return horizon_; }
  double state_regularization() const { return eps_q_; }
  double control_regularization() const { return eps_r_; }
  Index state_dim() const { return state_dim_; }

  // Copy with different identity regularization added to Q and every R_j.
  PlayerCost with_regularization(double eps_q, double eps_r) const;

  double evaluate(Time t, const VectorXd& x, const ControlSet& u) const;

  // Exact gradients and Hessians of the weighted primitive sum, plus
  // eps_q I on Q and eps_r I on each R_j. Symmetric by construction.
  // Throws DegenerateGeometryError at polyline kinks or coincident players.
  QuadraticCostApprox quadraticize(Time t, const VectorXd& x,
                                   const ControlSet& u) const;

 private:
  void check(const VectorXd& x, const ControlSet& u) const;

  PlayerIndex owner_;
  std::vector<CostPrimitive> primitives_;
  std::vector<PlayerLayout> layouts_;
  Index state_dim_;
  Time horizon_;
  double eps_q_;
  double eps_r_;
};

inline double evaluate_running_cost(const PlayerCost& cost, Time t,
                                    const VectorXd& x, const ControlSet& u) {
  return cost.evaluate(t, x, u);
}

// Left-endpoint quadrature: sum_k g(t_k, x_k, u_k) dt.
double evaluate_total_cost(const PlayerCost& cost, const OperatingPoint& op,
                           Time dt);

inline QuadraticCostApprox quadraticize(const PlayerCost& cost, Time t,
                                        const VectorXd& x,
                                        const ControlSet& u) {
  return cost.quadraticize(t, x, u);
}

}  // namespace ilqgame
