#pragma once

#include <vector>

#include "ilqgame/types.h"

namespace ilqgame {

// One time step of a discrete-time N-player LQ game in deviation
// coordinates:
//   x+ = A x + sum_j B[j] u_j
//   g_i = 1/2 x'Q[i]x + l[i]'x + sum_j (1/2 u_j'R[i][j]u_j + r[i][j]'u_j)
struct LQGameStage {
  MatrixXd A;
  std::vector<MatrixXd> B;
  std::vector<MatrixXd> Q;
  std::vector<VectorXd> l;
  std::vector<std::vector<MatrixXd>> R;
  std::vector<std::vector<VectorXd>> r;

  std::size_t num_players() const { return B.size(); }
  Index state_dim() const { return A.rows(); }
};

// Per-player value V_i(x) = 1/2 x'Z[i]x + zeta[i]'x (constants dropped).
struct ValueApprox {
  std::vector<MatrixXd> Z;
  std::vector<VectorXd> zeta;

  static ValueApprox zeros(std::size_t num_players, Index state_dim);
};

// Player i's affine feedback u_i = -P[k] dx - alpha[k] at step k.
struct AffineStrategy {
  std::vector<MatrixXd> P;
  std::vector<VectorXd> alpha;

  std::size_t num_steps() const { return P.size(); }
  static AffineStrategy zeros(std::size_t num_steps, Index control_dim,
                              Index state_dim);
};

using StrategySet = std::vector<AffineStrategy>;

struct StepSolution {
  std::vector<MatrixXd> P;
  std::vector<VectorXd> alpha;
  ValueApprox value;
};

// Reciprocal condition estimate below which a stage solve is rejected.
inline constexpr double kMinReciprocalCondition = 1e-12;

// Joint first-order conditions of all players' one-step problems followed by
// the value update. Throws SolveFailure tagged with `time_index` if the
// stacked system is singular or too ill-conditioned.
StepSolution solve_coupled_step(const ValueApprox& value_next,
                                const LQGameStage& stage,
                                std::size_t time_index = 0);

struct LQGameSolution {
  StrategySet strategies;
  // values[k] is the value at the start of stage k; values.back() is the
  // terminal value.
  std::vector<ValueApprox> values;
};

// Backward recursion from the terminal value over every stage. The result is
// a feedback Nash equilibrium of the LQ game.
LQGameSolution solve_lq_game(const std::vector<LQGameStage>& stages,
                             const ValueApprox& terminal);

struct ClosedLoopRollout {
  std::vector<VectorXd> states;    // K + 1 entries, states[K] terminal
  std::vector<ControlSet> controls;  // K entries
  std::vector<double> costs;         // per player, including terminal
};

// Simulates dx under du_i = -P_i dx - alpha_i and accumulates each player's
// quadratic stage costs and the terminal cost at the final state.
ClosedLoopRollout closed_loop_rollout(const StrategySet& strategies,
                                      const std::vector<LQGameStage>& stages,
                                      const VectorXd& x0,
                                      const ValueApprox* terminal = nullptr);

}  // namespace ilqgame
