#include "ilqgame/dynamics.h"

#include <cmath>
#include <string>

#include "ilqgame/errors.h"

namespace ilqgame {

void DynamicalSystem::check_dimensions(const VectorXd& x,
                                       const ControlSet& u) const {
  if (x.size() != state_dim())
    throw InvalidArgument("state has dimension " + std::to_string(x.size()) +
                          ", expected " + std::to_string(state_dim()));
  if (u.size() != num_players())
    throw InvalidArgument("got controls for " + std::to_string(u.size()) +
                          " players, expected " +
                          std::to_string(num_players()));
  for (PlayerIndex i = 0; i < u.size(); ++i) {
    if (u[i].size() != control_dim(i))
      throw InvalidArgument("player " + std::to_string(i) +
                            " control has dimension " +
                            std::to_string(u[i].size()) + ", expected " +
                            std::to_string(control_dim(i)));
  }
}

ControlSet DynamicalSystem::zero_controls() const {
  ControlSet u;
  u.reserve(num_players());
  for (PlayerIndex i = 0; i < num_players(); ++i)
    u.push_back(VectorXd::Zero(control_dim(i)));
  return u;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kUnicycle4D:
      return "unicycle4d";
    case ModelKind::kBicycle5D:
      return "bicycle5d";
    case ModelKind::kDubinsConstantSpeed3D:
      return "dubins3d";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "unicycle4d") return ModelKind::kUnicycle4D;
  if (name == "bicycle5d") return ModelKind::kBicycle5D;
  if (name == "dubins3d") return ModelKind::kDubinsConstantSpeed3D;
  throw InvalidArgument("unknown model kind '" + name + "'");
}

PlayerModel PlayerModel::unicycle() { return {}; }

PlayerModel PlayerModel::bicycle(double inter_axle_length) {
  if (!(inter_axle_length > 0.0))
    throw InvalidArgument("inter-axle length must be positive");
  PlayerModel m;
  m.kind = ModelKind::kBicycle5D;
  m.inter_axle_length = inter_axle_length;
  return m;
}

PlayerModel PlayerModel::dubins(double speed) {
  if (!(speed > 0.0)) throw InvalidArgument("Dubins speed must be positive");
  PlayerModel m;
  m.kind = ModelKind::kDubinsConstantSpeed3D;
  m.speed = speed;
  return m;
}

Index PlayerModel::state_dim() const {
  switch (kind) {
    case ModelKind::kUnicycle4D:
      return 4;
    case ModelKind::kBicycle5D:
      return 5;
    case ModelKind::kDubinsConstantSpeed3D:
      return 3;
  }
  return 0;
}

Index PlayerModel::control_dim() const {
  return kind == ModelKind::kDubinsConstantSpeed3D ? 1 : 2;
}

Index PlayerModel::speed_index() const {
  switch (kind) {
    case ModelKind::kUnicycle4D:
      return 3;
    case ModelKind::kBicycle5D:
      return 4;
    case ModelKind::kDubinsConstantSpeed3D:
      return -1;
  }
  return -1;
}

VectorXd PlayerModel::evaluate(const VectorXd& x, const VectorXd& u) const {
  VectorXd xdot(state_dim());
  const double c = std::cos(x(kTheta));
  const double s = std::sin(x(kTheta));
  switch (kind) {
    case ModelKind::kUnicycle4D: {
      const double v = x(3);
      xdot << v * c, v * s, u(0), u(1);
      break;
    }
    case ModelKind::kBicycle5D: {
      const double v = x(4);
      xdot << v * c, v * s, v * std::tan(x(3)) / inter_axle_length, u(0), u(1);
      break;
    }
    case ModelKind::kDubinsConstantSpeed3D:
      xdot << speed * c, speed * s, u(0);
      break;
  }
  return xdot;
}

void PlayerModel::jacobians(const VectorXd& x, const VectorXd& /*u*/,
                            Eigen::Ref<MatrixXd> A,
                            Eigen::Ref<MatrixXd> B) const {
  A.setZero();
  B.setZero();
  const double c = std::cos(x(kTheta));
  const double s = std::sin(x(kTheta));
  switch (kind) {
    case ModelKind::kUnicycle4D: {
      const double v = x(3);
      A(kPx, kTheta) = -v * s;
      A(kPx, 3) = c;
      A(kPy, kTheta) = v * c;
      A(kPy, 3) = s;
      B(kTheta, 0) = 1.0;
      B(3, 1) = 1.0;
      break;
    }
    case ModelKind::kBicycle5D: {
      const double v = x(4);
      const double tan_phi = std::tan(x(3));
      const double sec_phi = 1.0 / std::cos(x(3));
      A(kPx, kTheta) = -v * s;
      A(kPx, 4) = c;
      A(kPy, kTheta) = v * c;
      A(kPy, 4) = s;
      A(kTheta, 3) = v * sec_phi * sec_phi / inter_axle_length;
      A(kTheta, 4) = tan_phi / inter_axle_length;
      B(3, 0) = 1.0;
      B(4, 1) = 1.0;
      break;
    }
    case ModelKind::kDubinsConstantSpeed3D:
      A(kPx, kTheta) = -speed * s;
      A(kPy, kTheta) = speed * c;
      B(kTheta, 0) = 1.0;
      break;
  }
}

MultiPlayerSystem::MultiPlayerSystem(std::vector<PlayerModel> players)
    : players_(std::move(players)) {
  if (players_.empty())
    throw InvalidArgument("a game needs at least one player");
  offsets_.reserve(players_.size());
  for (const auto& p : players_) {
    if (p.kind == ModelKind::kBicycle5D && !(p.inter_axle_length > 0.0))
      throw InvalidArgument("inter-axle length must be positive");
    if (p.kind == ModelKind::kDubinsConstantSpeed3D && !(p.speed > 0.0))
      throw InvalidArgument("Dubins speed must be positive");
    offsets_.push_back(state_dim_);
    state_dim_ += p.state_dim();
  }
}

Index MultiPlayerSystem::control_dim(PlayerIndex player) const {
  return this->player(player).control_dim();
}

const PlayerModel& MultiPlayerSystem::player(PlayerIndex i) const {
  if (i >= players_.size())
    throw InvalidArgument("player index " + std::to_string(i) +
                          " out of range");
  return players_[i];
}

Index MultiPlayerSystem::state_offset(PlayerIndex i) const {
  player(i);
  return offsets_[i];
}

VectorXd MultiPlayerSystem::evaluate(Time /*t*/, const VectorXd& x,
                                     const ControlSet& u) const {
  check_dimensions(x, u);
  VectorXd xdot(state_dim_);
  for (PlayerIndex i = 0; i < players_.size(); ++i) {
    const Index n_i = players_[i].state_dim();
    xdot.segment(offsets_[i], n_i) =
        players_[i].evaluate(x.segment(offsets_[i], n_i), u[i]);
  }
  return xdot;
}

Linearization MultiPlayerSystem::linearize(Time /*t*/, const VectorXd& x,
                                           const ControlSet& u) const {
  check_dimensions(x, u);
  Linearization lin;
  lin.A = MatrixXd::Zero(state_dim_, state_dim_);
  lin.B.reserve(players_.size());
  for (PlayerIndex i = 0; i < players_.size(); ++i) {
    const Index n_i = players_[i].state_dim();
    const Index o = offsets_[i];
    MatrixXd B = MatrixXd::Zero(state_dim_, players_[i].control_dim());
    players_[i].jacobians(x.segment(o, n_i), u[i], lin.A.block(o, o, n_i, n_i),
                          B.middleRows(o, n_i));
    lin.B.push_back(std::move(B));
  }
  return lin;
}

namespace {

bool all_finite(const VectorXd& x, const ControlSet& u) {
  if (!x.allFinite()) return false;
  for (const auto& ui : u)
    if (!ui.allFinite()) return false;
  return true;
}

}  // namespace

VectorXd integrate_step(const DynamicalSystem& system, Time t,
                        const VectorXd& x, const ControlSet& u, Time dt) {
  if (!(dt > 0.0)) throw InvalidArgument("integration step must be positive");
  system.check_dimensions(x, u);
  if (!all_finite(x, u))
    throw NumericalInputError("non-finite state or control in integration");

  const double half = 0.5 * dt;
  const VectorXd k1 = system.evaluate(t, x, u);
  const VectorXd k2 = system.evaluate(t + half, x + half * k1, u);
  const VectorXd k3 = system.evaluate(t + half, x + half * k2, u);
  const VectorXd k4 = system.evaluate(t + dt, x + dt * k3, u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Linearization discretize(const Linearization& continuous, Time dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  Linearization d;
  d.A = MatrixXd::Identity(continuous.A.rows(), continuous.A.cols()) +
        dt * continuous.A;
  d.B.reserve(continuous.B.size());
  for (const auto& B : continuous.B) d.B.push_back(dt * B);
  return d;
}

}  // namespace ilqgame
