// Command-line front end: single solves, Monte Carlo studies and
// receding-horizon episodes on scenario files.
//
// Exit codes: 0 success, 1 non-convergence, 2 input error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ilqgame/errors.h"
#include "ilqgame/harness.h"
#include "ilqgame/scenario.h"

namespace {

constexpr int kOk = 0;
constexpr int kNotConverged = 1;
constexpr int kInputError = 2;

struct SolveArgs {
  std::string scenario;
  std::optional<double> eta;
  std::optional<double> tol;
  std::optional<std::size_t> max_iters;
  std::string out;
};

struct MonteCarloArgs {
  std::string scenario;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
};

struct RecedingArgs {
  std::string scenario;
  double episode = 0.0;
  double replan = 0.0;
  std::string out;
};

void report_files(const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

int run_solve(const SolveArgs& args) {
  using namespace ilqgame;
  ScenarioSpec spec = load_scenario(args.scenario);
  if (args.eta) spec.solver.step_size = *args.eta;
  if (args.tol) spec.solver.tolerance = *args.tol;
  if (args.max_iters) spec.solver.max_iterations = *args.max_iters;
  validate_scenario(spec);

  const Problem problem = build_problem(spec);
  std::vector<AffineStrategy> zeros;
  for (PlayerIndex i = 0; i < problem.system.num_players(); ++i)
    zeros.push_back(AffineStrategy::zeros(problem.config.discretization.num_steps(),
                                          problem.system.control_dim(i),
                                          problem.system.state_dim()));
  const SolveResult result = ilq_solve(problem.system, problem.costs,
                                       problem.x0, zeros, problem.config);
  const SolveSummary s = summarize(result, problem);

  std::printf("%s: %s after %zu iterations in %.3f s\n", spec.name.c_str(),
              s.converged ? "converged" : "did not converge", s.iterations,
              s.total_seconds);
  for (std::size_t i = 0; i < s.final_costs.size(); ++i)
    std::printf("  %-12s cost %.6g\n", spec.players[i].name.c_str(),
                s.final_costs[i]);
  std::printf("  max |alpha| %.3g, min pairwise distance %.3f m\n",
              s.final_max_alpha, s.min_distance);
  if (!args.out.empty()) report_files(export_artifacts(spec, result, args.out));
  return s.converged ? kOk : kNotConverged;
}

int run_montecarlo(const MonteCarloArgs& args) {
  using namespace ilqgame;
  const ScenarioSpec spec = load_scenario(args.scenario);
  const MonteCarloReport report =
      run_monte_carlo(spec, args.samples, args.seed, args.threads);
  const MonteCarloSummary s = summarize(report);

  std::printf("%s: %zu/%zu converged (%zu on the first draw, %zu resampled) "
              "in %.1f s\n",
              spec.name.c_str(), s.converged, s.num_samples,
              s.first_attempt_converged, s.resample_count, report.seconds);
  for (std::size_t c = 0; c < s.cluster_sizes.size(); ++c)
    std::printf("  cluster %zu: %zu members, passing %s\n", c,
                s.cluster_sizes[c], s.cluster_passing[c].c_str());
  std::printf("  outliers: %zu\n  iterations histogram:", s.outliers);
  for (std::size_t b = 0; b < s.iteration_histogram.size(); ++b)
    std::printf(" %zu", s.iteration_histogram[b]);
  std::printf("\n");
  if (!args.out.empty()) report_files(export_artifacts(spec, report, args.out));
  return s.converged == s.num_samples ? kOk : kNotConverged;
}

int run_receding(const RecedingArgs& args) {
  using namespace ilqgame;
  const ScenarioSpec spec = load_scenario(args.scenario);
  const RecedingHorizonLog log =
      run_receding_horizon(spec, args.episode, args.replan);
  const RecedingSummary s = summarize(log);

  std::printf("%s: %zu/%zu replans converged; min clearance %.3f m\n",
              spec.name.c_str(), s.converged, s.replans, s.min_distance);
  std::printf("  solve time mean %.1f ms, max %.1f ms\n",
              1e3 * s.mean_solve_seconds, 1e3 * s.max_solve_seconds);
  if (!args.out.empty()) report_files(export_artifacts(spec, log, args.out));
  return s.converged == s.replans ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative LQ game solver"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario from zero strategies");
  solve_cmd->add_option("--scenario", solve.scenario, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--eta", solve.eta, "Step size in (0, 1]");
  solve_cmd->add_option("--tol", solve.tol, "Convergence tolerance");
  solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration cap");
  solve_cmd->add_option("--out", solve.out, "Output directory");

  MonteCarloArgs mc;
  auto* mc_cmd = app.add_subcommand("montecarlo", "Solve from random sinusoidal initializations");
  mc_cmd->add_option("--scenario", mc.scenario, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  mc_cmd->add_option("--samples", mc.samples, "Number of samples")
      ->required()
      ->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed", mc.seed, "Master seed")->required();
  mc_cmd->add_option("--threads", mc.threads, "Worker threads (0: all cores)");
  mc_cmd->add_option("--out", mc.out, "Output directory");

  RecedingArgs rh;
  auto* rh_cmd = app.add_subcommand("receding", "Run a receding-horizon episode");
  rh_cmd->add_option("--scenario", rh.scenario, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  rh_cmd->add_option("--episode", rh.episode, "Episode length, s")
      ->required()
      ->check(CLI::PositiveNumber);
  rh_cmd->add_option("--replan", rh.replan, "Replanning interval, s")
      ->required()
      ->check(CLI::PositiveNumber);
  rh_cmd->add_option("--out", rh.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*mc_cmd) return run_montecarlo(mc);
    return run_receding(rh);
  } catch (const ilqgame::ParseError& e) {
    std::cerr << "error: " << e.what() << " [" << e.field();
    if (e.line()) std::cerr << ", line " << *e.line();
    std::cerr << "]\n";
    return kInputError;
  } catch (const ilqgame::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ilqgame::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ilqgame::EpisodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotConverged;
  }
}
