#pragma once

#include <string>
#include <vector>

#include "ilqgame/types.h"

namespace ilqgame {

// Continuous-time Jacobians of the joint vector field. B[i] is n x m_i.
struct Linearization {
  MatrixXd A;
  std::vector<MatrixXd> B;
};

// Joint dynamics x' = f(t, x, u_1, ..., u_N). The solver only talks to this
// interface; MultiPlayerSystem is the concrete model used by scenarios.
class DynamicalSystem {
 public:
  virtual ~DynamicalSystem() = default;

  virtual Index state_dim() const = 0;
  virtual std::size_t num_players() const = 0;
  virtual Index control_dim(PlayerIndex player) const = 0;

  virtual VectorXd evaluate(Time t, const VectorXd& x,
                            const ControlSet& u) const = 0;
  virtual Linearization linearize(Time t, const VectorXd& x,
                                  const ControlSet& u) const = 0;

  // Throws InvalidArgument naming the offending player on mismatch.
  void check_dimensions(const VectorXd& x, const ControlSet& u) const;
  ControlSet zero_controls() const;
};

enum class ModelKind { kUnicycle4D, kBicycle5D, kDubinsConstantSpeed3D };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Single-player kinematic model.
//   Unicycle4D             x = (px, py, theta, v),      u = (omega, a)
//   Bicycle5D              x = (px, py, theta, phi, v), u = (psi, a)
//   DubinsConstantSpeed3D  x = (px, py, theta),         u = (omega)
struct PlayerModel {
  ModelKind kind = ModelKind::kUnicycle4D;
  double inter_axle_length = 0.0;  // Bicycle5D only, m
  double speed = 0.0;              // DubinsConstantSpeed3D only, m/s

  static PlayerModel unicycle();
  static PlayerModel bicycle(double inter_axle_length);
  static PlayerModel dubins(double speed);

  Index state_dim() const;
  Index control_dim() const;

  static constexpr Index kPx = 0;
  static constexpr Index kPy = 1;
  static constexpr Index kTheta = 2;
  // Offset of the speed state, or -1 when speed is not a state.
  Index speed_index() const;

  // Block derivatives; x and u are this player's own slices.
  VectorXd evaluate(const VectorXd& x, const VectorXd& u) const;
  void jacobians(const VectorXd& x, const VectorXd& u,
                 Eigen::Ref<MatrixXd> A, Eigen::Ref<MatrixXd> B) const;

  bool operator==(const PlayerModel&) const = default;
};

// Players are dynamically decoupled; the joint state stacks each player's
// block contiguously in player order.
class MultiPlayerSystem final : public DynamicalSystem {
 public:
  explicit MultiPlayerSystem(std::vector<PlayerModel> players);

  Index state_dim() const override { return state_dim_; }
  std::size_t num_players() const override { return players_.size(); }
  Index control_dim(PlayerIndex player) const override;

  VectorXd evaluate(Time t, const VectorXd& x,
                    const ControlSet& u) const override;
  Linearization linearize(Time t, const VectorXd& x,
                          const ControlSet& u) const override;

  const std::vector<PlayerModel>& players() const { return players_; }
  const PlayerModel& player(PlayerIndex i) const;
  // First joint-state index of player i's block.
  Index state_offset(PlayerIndex i) const;

 private:
  std::vector<PlayerModel> players_;
  std::vector<Index> offsets_;
  Index state_dim_ = 0;
};

// Classical fourth-order Runge-Kutta step with controls held over [t, t+dt].
VectorXd integrate_step(const DynamicalSystem& system, Time t,
                        const VectorXd& x, const ControlSet& u, Time dt);

inline Linearization linearize(const DynamicalSystem& system, Time t,
                               const VectorXd& x, const ControlSet& u) {
  return system.linearize(t, x, u);
}

// First-order discretization: A_d = I + dt A, B_d = dt B.
Linearization discretize(const Linearization& continuous, Time dt);

}  // namespace ilqgame
