#include "ilqgame/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "ilqgame/errors.h"

namespace ilqgame {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_strategies(const DynamicalSystem& system,
                      const StrategySet& strategies, std::size_t K) {
  if (strategies.size() != system.num_players())
    throw InvalidArgument("expected strategies for " +
                          std::to_string(system.num_players()) + " players");
  for (PlayerIndex i = 0; i < strategies.size(); ++i) {
    const auto& s = strategies[i];
    if (s.P.size() != K || s.alpha.size() != K)
      throw InvalidArgument("player " + std::to_string(i) +
                            " strategy does not cover the horizon");
    for (std::size_t k = 0; k < K; ++k) {
      if (s.P[k].rows() != system.control_dim(i) ||
          s.P[k].cols() != system.state_dim() ||
          s.alpha[k].size() != system.control_dim(i))
        throw InvalidArgument("player " + std::to_string(i) +
                              " strategy has wrong dimensions");
    }
  }
}

struct Approximation {
  LQGameSolution solution;
  double regularization = 0.0;
};

// LQ solve with the escalating regularization retry.
Approximation approximate_and_solve(const DynamicalSystem& system,
                                    const std::vector<PlayerCost>& costs,
                                    const OperatingPoint& op,
                                    const RegularizationSchedule& schedule,
                                    double regularization) {
  const ValueApprox terminal =
      ValueApprox::zeros(system.num_players(), system.state_dim());
  for (;;) {
    std::vector<PlayerCost> regularized;
    const std::vector<PlayerCost>* used = &costs;
    if (regularization > 0.0) {
      regularized.reserve(costs.size());
      for (const auto& c : costs)
        regularized.push_back(c.with_regularization(
            std::max(c.state_regularization(), regularization),
            std::max(c.control_regularization(), regularization)));
      used = &regularized;
    }
    try {
      const auto stages = build_lq_approximation(system, *used, op);
      return {solve_lq_game(stages, terminal), regularization};
    } catch (const SolveFailure&) {
      const double next = regularization == 0.0
                              ? schedule.initial
                              : regularization * schedule.growth;
      if (next > schedule.cap * (1.0 + 1e-12)) throw;
      regularization = next;
    }
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(step_size > 0.0 && step_size <= 1.0))
    throw InvalidArgument("step size must lie in (0, 1]");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_iterations < 1)
    throw InvalidArgument("max iterations must be at least 1");
  if (step_policy == StepPolicy::kDecay && !(decay_rate > 0.0 && decay_rate <= 1.0))
    throw InvalidArgument("decay rate must lie in (0, 1]");
  if (!(regularization.initial > 0.0) || !(regularization.growth > 1.0) ||
      !(regularization.cap >= regularization.initial))
    throw InvalidArgument("invalid regularization schedule");
  if (!(discretization.dt > 0.0) || discretization.num_steps() < 1)
    throw InvalidArgument("invalid time discretization");
}

double SolverConfig::step_size_at(std::size_t iteration) const {
  if (step_policy == StepPolicy::kDecay)
    return step_size * std::pow(decay_rate, static_cast<double>(iteration));
  return step_size;
}

OperatingPoint compute_operating_point(const DynamicalSystem& system,
                                       const VectorXd& x0,
                                       const OperatingPoint& anchor,
                                       const StrategySet& strategies,
                                       double step) {
  const std::size_t K = anchor.num_steps();
  if (K == 0 || anchor.controls.size() != K)
    throw InvalidArgument("anchor trajectory is empty or inconsistent");
  if (x0.size() != system.state_dim())
    throw InvalidArgument("initial state has wrong dimension");
  check_strategies(system, strategies, K);
  if (!x0.allFinite()) throw NumericalInputError("initial state is not finite");

  const std::size_t N = system.num_players();
  OperatingPoint op;
  op.dt = anchor.dt;
  op.states.reserve(K);
  op.controls.reserve(K);
  VectorXd x = x0;
  for (std::size_t k = 0; k < K; ++k) {
    const VectorXd dx = x - anchor.states[k];
    ControlSet u(N);
    for (PlayerIndex i = 0; i < N; ++i) {
      u[i] = anchor.controls[k][i] - strategies[i].P[k] * dx -
             step * strategies[i].alpha[k];
      if (!u[i].allFinite())
        throw DivergenceError("non-finite control in rollout", k);
    }
    op.states.push_back(x);
    if (k + 1 < K) {
      x = integrate_step(system, op.time_at(k), x, u, op.dt);
      if (!x.allFinite())
        throw DivergenceError("non-finite state in rollout", k + 1);
    }
    op.controls.push_back(std::move(u));
  }
  return op;
}

std::vector<LQGameStage> build_lq_approximation(
    const DynamicalSystem& system, const std::vector<PlayerCost>& costs,
    const OperatingPoint& op) {
  const std::size_t N = system.num_players();
  if (costs.size() != N)
    throw InvalidArgument("expected one cost per player");
  std::vector<LQGameStage> stages;
  stages.reserve(op.num_steps());
  for (std::size_t k = 0; k < op.num_steps(); ++k) {
    const Time t = op.time_at(k);
    const Linearization lin =
        discretize(system.linearize(t, op.states[k], op.controls[k]), op.dt);
    LQGameStage stage;
    stage.A = lin.A;
    stage.B = lin.B;
    for (PlayerIndex i = 0; i < N; ++i) {
      QuadraticCostApprox q;
      try {
        q = costs[i].quadraticize(t, op.states[k], op.controls[k]);
      } catch (const DegenerateGeometryError& e) {
        throw DegenerateGeometryError(e.what(), k);
      }
      stage.Q.push_back(std::move(q.Q));
      stage.l.push_back(std::move(q.l));
      stage.R.push_back(std::move(q.R));
      stage.r.push_back(std::move(q.r));
    }
    stages.push_back(std::move(stage));
  }
  return stages;
}

double max_state_difference(const OperatingPoint& a, const OperatingPoint& b) {
  if (a.num_steps() != b.num_steps())
    throw InvalidArgument("trajectories have different lengths");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.num_steps(); ++k) {
    if (a.states[k].size() != b.states[k].size())
      throw InvalidArgument("trajectories have different state dimensions");
    worst = std::max(worst, (a.states[k] - b.states[k]).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

bool check_convergence(const OperatingPoint& current,
                       const OperatingPoint& previous, double tolerance) {
  return max_state_difference(current, previous) <= tolerance;
}

double max_alpha_norm(const StrategySet& strategies) {
  double worst = 0.0;
  for (const auto& s : strategies)
    for (const auto& a : s.alpha)
      if (a.size() > 0) worst = std::max(worst, a.lpNorm<Eigen::Infinity>());
  return worst;
}

StrategySet open_loop_strategies(const std::vector<ControlSet>& controls,
                                 Index state_dim) {
  if (controls.empty()) throw InvalidArgument("no controls given");
  const std::size_t N = controls.front().size();
  StrategySet s(N);
  for (PlayerIndex i = 0; i < N; ++i) {
    s[i] = AffineStrategy::zeros(controls.size(), controls.front()[i].size(),
                                 state_dim);
    for (std::size_t k = 0; k < controls.size(); ++k)
      s[i].alpha[k] = -controls[k][i];
  }
  return s;
}

SolveResult ilq_solve(const DynamicalSystem& system,
                      const std::vector<PlayerCost>& costs, const VectorXd& x0,
                      const StrategySet& initial_strategies,
                      const SolverConfig& config,
                      const std::optional<OperatingPoint>& initial_anchor) {
  config.validate();
  const auto start = Clock::now();
  const std::size_t K = config.discretization.num_steps();
  const std::size_t N = system.num_players();
  if (costs.size() != N) throw InvalidArgument("expected one cost per player");

  std::vector<Index> control_dims;
  for (PlayerIndex i = 0; i < N; ++i) control_dims.push_back(system.control_dim(i));
  const OperatingPoint anchor =
      initial_anchor ? *initial_anchor
                     : OperatingPoint::zeros(system.state_dim(), control_dims,
                                             K, config.discretization.dt);
  if (anchor.num_steps() != K)
    throw InvalidArgument("initial anchor does not match the time grid");

  SolveResult result;
  OperatingPoint op =
      compute_operating_point(system, x0, anchor, initial_strategies, 1.0);
  double regularization = 0.0;

  for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
    const auto iter_start = Clock::now();
    IterationDiagnostics diag;
    for (const auto& c : costs)
      diag.costs.push_back(evaluate_total_cost(c, op, op.dt));

    Approximation approx = approximate_and_solve(system, costs, op,
                                                 config.regularization,
                                                 regularization);
    regularization = approx.regularization;
    const StrategySet& candidate = approx.solution.strategies;
    diag.max_alpha = max_alpha_norm(candidate);
    diag.regularization = regularization;

    double step = config.step_size_at(iter);
    OperatingPoint next;
    for (std::size_t halving = 0;; ++halving) {
      try {
        next = compute_operating_point(system, x0, op, candidate, step);
        break;
      } catch (const DivergenceError& e) {
        if (halving >= config.max_step_halvings)
          throw DivergenceError("rollout diverged after step halving",
                                e.time_index(), iter);
        step *= 0.5;
      }
    }
    diag.step_size = step;
    diag.trajectory_change = max_state_difference(next, op);
    op = std::move(next);
    diag.seconds = seconds_since(iter_start);
    result.diagnostics.push_back(std::move(diag));
    result.iterations = iter + 1;
    if (result.diagnostics.back().trajectory_change <= config.tolerance) {
      result.converged = true;
      break;
    }
  }

  Approximation final_approx = approximate_and_solve(
      system, costs, op, config.regularization, regularization);
  result.strategies = std::move(final_approx.solution.strategies);
  result.final_max_alpha = max_alpha_norm(result.strategies);
  result.operating_point = std::move(op);
  result.total_seconds = seconds_since(start);
  return result;
}

}  // namespace ilqgame
