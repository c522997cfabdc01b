#pragma once

#include <optional>
#include <vector>

#include "ilqgame/cost.h"
#include "ilqgame/dynamics.h"
#include "ilqgame/lq_game.h"
#include "ilqgame/operating_point.h"
#include "ilqgame/types.h"

namespace ilqgame {

enum class StepPolicy { kFixed, kDecay };

// Identity regularization tried when an LQ solve fails: start at `initial`,
// multiply by `growth` until `cap` is exceeded.
struct RegularizationSchedule {
  double initial = 1e-4;
  double growth = 10.0;
  double cap = 1.0;
};

struct SolverConfig {
  TimeDiscretization discretization;
  double step_size = 0.01;  // eta in (0, 1]
  StepPolicy step_policy = StepPolicy::kFixed;
  double decay_rate = 0.95;  // eta_k = eta * rate^k under kDecay
  double tolerance = 0.01;   // l-infinity on states
  std::size_t max_iterations = 100;
  RegularizationSchedule regularization;
  std::size_t max_step_halvings = 5;

  void validate() const;
  double step_size_at(std::size_t iteration) const;
};

struct IterationDiagnostics {
  std::vector<double> costs;  // each player's total cost of the iterate
  double max_alpha = 0.0;     // max_{i,t} |alpha_i(t)|_inf before scaling
  double trajectory_change = 0.0;
  double step_size = 0.0;
  double regularization = 0.0;
  double seconds = 0.0;
};

struct SolveResult {
  bool converged = false;
  std::size_t iterations = 0;
  // Final strategies, anchored to `operating_point`.
  StrategySet strategies;
  OperatingPoint operating_point;
  std::vector<IterationDiagnostics> diagnostics;
  // max alpha of `strategies`.
  double final_max_alpha = 0.0;
  double total_seconds = 0.0;
};

// Rolls the nonlinear system forward from x0 under
//   u_i(t) = u_anchor_i(t) - P_i(t) (x(t) - x_anchor(t)) - step * alpha_i(t).
// Throws DivergenceError on a non-finite state or control.
OperatingPoint compute_operating_point(const DynamicalSystem& system,
                                       const VectorXd& x0,
                                       const OperatingPoint& anchor,
                                       const StrategySet& strategies,
                                       double step);

// Linearize and discretize dynamics and quadraticize every player's cost at
// each step of `op`.
std::vector<LQGameStage> build_lq_approximation(
    const DynamicalSystem& system, const std::vector<PlayerCost>& costs,
    const OperatingPoint& op);

// True iff max_{k, s} |current.states[k](s) - previous.states[k](s)| <= tol.
bool check_convergence(const OperatingPoint& current,
                       const OperatingPoint& previous, double tolerance);

double max_state_difference(const OperatingPoint& a, const OperatingPoint& b);

double max_alpha_norm(const StrategySet& strategies);

// Open-loop controls expressed as strategies: P = 0, alpha = -u.
StrategySet open_loop_strategies(const std::vector<ControlSet>& controls,
                                 Index state_dim);

// Iterative LQ game solve. `initial_anchor` defaults to an all-zero
// trajectory, so zero strategies mean zero controls and open-loop strategies
// replay their controls.
SolveResult ilq_solve(const DynamicalSystem& system,
                      const std::vector<PlayerCost>& costs, const VectorXd& x0,
                      const StrategySet& initial_strategies,
                      const SolverConfig& config,
                      const std::optional<OperatingPoint>& initial_anchor = {});

}  // namespace ilqgame
