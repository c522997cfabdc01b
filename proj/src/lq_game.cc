#include "ilqgame/lq_game.h"

#include <string>

#include "ilqgame/errors.h"

namespace ilqgame {

ValueApprox ValueApprox::zeros(std::size_t num_players, Index state_dim) {
  ValueApprox v;
  v.Z.assign(num_players, MatrixXd::Zero(state_dim, state_dim));
  v.zeta.assign(num_players, VectorXd::Zero(state_dim));
  return v;
}

AffineStrategy AffineStrategy::zeros(std::size_t num_steps, Index control_dim,
                                     Index state_dim) {
  AffineStrategy s;
  s.P.assign(num_steps, MatrixXd::Zero(control_dim, state_dim));
  s.alpha.assign(num_steps, VectorXd::Zero(control_dim));
  return s;
}

namespace {

void check_stage(const LQGameStage& stage, std::size_t k) {
  const std::size_t N = stage.num_players();
  const Index n = stage.state_dim();
  auto fail = [k](const std::string& what) {
    throw InvalidArgument("LQ stage " + std::to_string(k) + ": " + what);
  };
  if (N == 0) fail("no players");
  if (stage.A.cols() != n) fail("A is not square");
  if (stage.Q.size() != N || stage.l.size() != N || stage.R.size() != N ||
      stage.r.size() != N)
    fail("per-player cost terms do not match the number of players");
  for (std::size_t i = 0; i < N; ++i) {
    if (stage.B[i].rows() != n) fail("B has wrong row count");
    if (stage.Q[i].rows() != n || stage.Q[i].cols() != n || stage.l[i].size() != n)
      fail("Q or l has wrong dimension");
    if (stage.R[i].size() != N || stage.r[i].size() != N)
      fail("R or r does not cover every player");
    for (std::size_t j = 0; j < N; ++j) {
      const Index m = stage.B[j].cols();
      if (stage.R[i][j].rows() != m || stage.R[i][j].cols() != m ||
          stage.r[i][j].size() != m)
        fail("R or r block has wrong dimension");
    }
  }
}

}  // namespace

StepSolution solve_coupled_step(const ValueApprox& value_next,
                                const LQGameStage& stage,
                                std::size_t time_index) {
  check_stage(stage, time_index);
  const std::size_t N = stage.num_players();
  const Index n = stage.state_dim();
  if (value_next.Z.size() != N || value_next.zeta.size() != N)
    throw InvalidArgument("value does not cover every player");

  std::vector<Index> offset(N + 1, 0);
  for (std::size_t i = 0; i < N; ++i)
    offset[i + 1] = offset[i] + stage.B[i].cols();
  const Index total_m = offset[N];

  // S [P; alpha] = [Y_P, Y_alpha]; row block i is player i's stationarity
  // condition with every other player's feedback substituted in.
  MatrixXd S(total_m, total_m);
  MatrixXd Y(total_m, n + 1);
  for (std::size_t i = 0; i < N; ++i) {
    const Index mi = stage.B[i].cols();
    const MatrixXd BiZ = stage.B[i].transpose() * value_next.Z[i];
    for (std::size_t j = 0; j < N; ++j) {
      S.block(offset[i], offset[j], mi, stage.B[j].cols()) = BiZ * stage.B[j];
    }
    S.block(offset[i], offset[i], mi, mi) += stage.R[i][i];
    Y.block(offset[i], 0, mi, n) = BiZ * stage.A;
    Y.block(offset[i], n, mi, 1) =
        stage.B[i].transpose() * value_next.zeta[i] + stage.r[i][i];
  }

  if (!S.allFinite() || !Y.allFinite())
    throw SolveFailure("non-finite coupled system", time_index);
  const Eigen::PartialPivLU<MatrixXd> lu(S);
  const double rcond = lu.rcond();
  if (!(rcond >= kMinReciprocalCondition))
    throw SolveFailure("coupled system is singular or ill-conditioned "
                       "(rcond " + std::to_string(rcond) + ")",
                       time_index);
  const MatrixXd X = lu.solve(Y);

  StepSolution out;
  out.P.reserve(N);
  out.alpha.reserve(N);
  MatrixXd F = stage.A;
  VectorXd beta = VectorXd::Zero(n);
  for (std::size_t j = 0; j < N; ++j) {
    const Index mj = stage.B[j].cols();
    out.P.push_back(X.block(offset[j], 0, mj, n));
    out.alpha.push_back(X.block(offset[j], n, mj, 1));
    F.noalias() -= stage.B[j] * out.P[j];
    beta.noalias() -= stage.B[j] * out.alpha[j];
  }

  out.value.Z.reserve(N);
  out.value.zeta.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    MatrixXd Z = stage.Q[i];
    VectorXd zeta = stage.l[i];
    for (std::size_t j = 0; j < N; ++j) {
      const MatrixXd PtR = out.P[j].transpose() * stage.R[i][j];
      Z.noalias() += PtR * out.P[j];
      zeta.noalias() += PtR * out.alpha[j];
      zeta.noalias() -= out.P[j].transpose() * stage.r[i][j];
    }
    const MatrixXd ZF = value_next.Z[i] * F;
    Z.noalias() += F.transpose() * ZF;
    zeta.noalias() +=
        F.transpose() * (value_next.Z[i] * beta + value_next.zeta[i]);
    out.value.Z.push_back(0.5 * (Z + Z.transpose()));
    out.value.zeta.push_back(std::move(zeta));
  }
  return out;
}

LQGameSolution solve_lq_game(const std::vector<LQGameStage>& stages,
                             const ValueApprox& terminal) {
  if (stages.empty()) throw InvalidArgument("LQ game needs at least one stage");
  const std::size_t K = stages.size();
  const std::size_t N = stages.front().num_players();
  const Index n = stages.front().state_dim();
  if (terminal.Z.size() != N || terminal.zeta.size() != N)
    throw InvalidArgument("terminal value does not cover every player");

  LQGameSolution sol;
  sol.strategies.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Index m = stages.front().B[i].cols();
    sol.strategies[i] = AffineStrategy::zeros(K, m, n);
  }
  sol.values.resize(K + 1);
  sol.values[K] = terminal;
  for (std::size_t kk = K; kk-- > 0;) {
    if (stages[kk].num_players() != N || stages[kk].state_dim() != n)
      throw InvalidArgument("LQ stages have inconsistent dimensions");
    StepSolution step = solve_coupled_step(sol.values[kk + 1], stages[kk], kk);
    for (std::size_t i = 0; i < N; ++i) {
      sol.strategies[i].P[kk] = std::move(step.P[i]);
      sol.strategies[i].alpha[kk] = std::move(step.alpha[i]);
    }
    sol.values[kk] = std::move(step.value);
  }
  return sol;
}

ClosedLoopRollout closed_loop_rollout(const StrategySet& strategies,
                                      const std::vector<LQGameStage>& stages,
                                      const VectorXd& x0,
                                      const ValueApprox* terminal) {
  const std::size_t K = stages.size();
  if (K == 0) throw InvalidArgument("rollout needs at least one stage");
  const std::size_t N = stages.front().num_players();
  if (strategies.size() != N)
    throw InvalidArgument("strategy count does not match player count");
  for (const auto& s : strategies)
    if (s.num_steps() < K || s.alpha.size() < K)
      throw InvalidArgument("strategy shorter than the stage sequence");
  if (x0.size() != stages.front().state_dim())
    throw InvalidArgument("initial deviation has wrong dimension");

  ClosedLoopRollout out;
  out.costs.assign(N, 0.0);
  out.states.reserve(K + 1);
  out.controls.reserve(K);
  VectorXd x = x0;
  for (std::size_t k = 0; k < K; ++k) {
    const LQGameStage& st = stages[k];
    ControlSet u(N);
    for (std::size_t j = 0; j < N; ++j)
      u[j] = -strategies[j].P[k] * x - strategies[j].alpha[k];
    for (std::size_t i = 0; i < N; ++i) {
      double c = 0.5 * x.dot(st.Q[i] * x) + st.l[i].dot(x);
      for (std::size_t j = 0; j < N; ++j)
        c += 0.5 * u[j].dot(st.R[i][j] * u[j]) + st.r[i][j].dot(u[j]);
      out.costs[i] += c;
    }
    VectorXd next = st.A * x;
    for (std::size_t j = 0; j < N; ++j) next.noalias() += st.B[j] * u[j];
    out.states.push_back(std::move(x));
    out.controls.push_back(std::move(u));
    x = std::move(next);
  }
  if (terminal) {
    for (std::size_t i = 0; i < N; ++i)
      out.costs[i] += 0.5 * x.dot(terminal->Z[i] * x) + terminal->zeta[i].dot(x);
  }
  out.states.push_back(std::move(x));
  return out;
}

}  // namespace ilqgame
