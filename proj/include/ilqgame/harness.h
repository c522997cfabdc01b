#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ilqgame/operating_point.h"
#include "ilqgame/scenario.h"
#include "ilqgame/solver.h"

namespace ilqgame {

// ---------------------------------------------------------------------------
// Random initializations

// Per-stream seed derived from a master seed with a splitmix64 counter, so
// any sample can be regenerated without replaying earlier ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Open-loop controls for one player, one vector per time step. Each channel
// is a sin(2 pi f t + phase) with (a, f, phase) uniform in `ranges`, drawn
// from mt19937_64 seeded with derive_seed(seed, player).
std::vector<VectorXd> sample_sinusoidal_strategy(
    std::uint64_t seed, PlayerIndex player, Index control_dim,
    const TimeDiscretization& discretization, const SinusoidRanges& ranges);

// ---------------------------------------------------------------------------
// Clustering

struct Cluster {
  std::vector<std::size_t> members;  // indices into the clustered input
  std::size_t representative = 0;    // the member that founded the cluster
};

struct Clustering {
  std::vector<Cluster> clusters;
  std::vector<std::size_t> outliers;
};

// Euclidean norm of the difference of the stacked state sequences.
double trajectory_distance(const OperatingPoint& a, const OperatingPoint& b);

// Greedy pass in input order: join the first cluster whose founder lies
// within `threshold`, otherwise found a new one. Clusters smaller than
// `min_size` become outliers. Clusters are returned largest first (ties by
// founding order).
Clustering cluster_trajectories(const std::vector<OperatingPoint>& trajectories,
                                double threshold, std::size_t min_size = 1);

// For every pair of players whose x-order flips over the trajectory, the
// sign of y_i - y_j where they are closest in x: '+' if i passes above j,
// '-' below. Pairs that never swap are '.'. Pairs are listed (0,1), (0,2),
// ..., (1,2), ...
std::string passing_signature(const OperatingPoint& trajectory,
                              const MultiPlayerSystem& system);

// Smallest pairwise planar distance between players over the trajectory.
double min_pairwise_distance(const std::vector<VectorXd>& states,
                             const MultiPlayerSystem& system);

// ---------------------------------------------------------------------------
// Monte Carlo

struct SampleRecord {
  std::size_t id = 0;
  std::uint64_t seed = 0;  // seed of the attempt that produced this record
  bool resampled = false;
  bool converged = false;
  bool first_attempt_converged = false;
  std::size_t first_attempt_iterations = 0;
  std::string first_attempt_failure;
  std::size_t iterations = 0;
  double final_max_alpha = 0.0;
  double seconds = 0.0;
  std::string failure;  // solver exception text, if any
  OperatingPoint trajectory;
  // costs[k][i]: player i's total cost at iteration k.
  std::vector<std::vector<double>> costs;
  std::vector<double> max_alpha;  // per iteration
};

struct ClusterStats {
  std::vector<std::size_t> members;  // sample ids
  std::size_t representative = 0;    // sample id
  std::string passing;
  // mean[k][i], stddev[k][i] over members; shorter runs are padded with
  // their final values.
  std::vector<std::vector<double>> mean_cost;
  std::vector<std::vector<double>> stddev_cost;
};

struct MonteCarloReport {
  std::size_t num_samples = 0;
  std::uint64_t master_seed = 0;
  std::vector<SampleRecord> samples;
  std::vector<ClusterStats> clusters;
  std::vector<std::size_t> outliers;  // sample ids
  std::size_t resample_count = 0;
  // histogram[b] counts converged samples needing [10b + 1, 10b + 10]
  // iterations.
  std::vector<std::size_t> iteration_histogram;
  double seconds = 0.0;

  std::size_t converged_count() const;
  std::size_t first_attempt_converged_count() const;
};

// threads = 0 uses the hardware concurrency. Results do not depend on it.
MonteCarloReport run_monte_carlo(const ScenarioSpec& spec,
                                 std::size_t num_samples, std::uint64_t seed,
                                 unsigned threads = 0);

// ---------------------------------------------------------------------------
// Receding horizon

struct ReplanRecord {
  std::size_t index = 0;
  Time time = 0.0;
  VectorXd state;  // executed state the plan starts from
  bool converged = false;
  std::size_t iterations = 0;
  double seconds = 0.0;
  OperatingPoint plan;  // times relative to `time`
  std::vector<double> max_alpha;  // per iteration
  double final_max_alpha = 0.0;
};

// Executed closed-loop motion. controls[k] is held over
// [times[k], times[k] + durations[k]] and takes states[k] to states[k + 1].
struct ExecutedTrace {
  std::vector<Time> times;
  std::vector<Time> durations;
  std::vector<VectorXd> states;  // one more than controls
  std::vector<ControlSet> controls;
};

struct RecedingHorizonLog {
  Time episode = 0.0;
  Time replan_interval = 0.0;
  std::vector<ReplanRecord> replans;
  ExecutedTrace trace;
  double min_distance = 0.0;

  bool all_converged() const;
};

// Replans every `replan_interval` seconds from the executed state, warm
// starting from the previous plan shifted in time (last step repeated to
// fill the tail). Between replans every agent follows the latest plan's
// feedback law, except where a scripted disturbance overrides its controls.
// The interval need not be a multiple of dt; the final partial step of each
// interval is integrated with a shorter hold.
RecedingHorizonLog run_receding_horizon(const ScenarioSpec& spec,
                                        Time episode, Time replan_interval);

// Warm start for a plan starting `shift` seconds after `previous`'s start:
// anchor trajectory and strategies whose first rollout replays `previous`.
std::pair<OperatingPoint, StrategySet> shift_plan(
    const OperatingPoint& previous, const StrategySet& strategies, Time shift);

// ---------------------------------------------------------------------------
// Export

struct SolveSummary {
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t num_steps = 0;
  std::vector<double> final_costs;
  double final_max_alpha = 0.0;
  double min_distance = 0.0;
  double total_seconds = 0.0;
  bool operator==(const SolveSummary&) const = default;
};

SolveSummary summarize(const SolveResult& result, const Problem& problem);

struct MonteCarloSummary {
  std::size_t num_samples = 0;
  std::size_t converged = 0;
  std::size_t first_attempt_converged = 0;
  std::size_t resample_count = 0;
  std::vector<std::size_t> cluster_sizes;
  std::vector<std::string> cluster_passing;
  std::size_t outliers = 0;
  std::vector<std::size_t> iteration_histogram;
  bool operator==(const MonteCarloSummary&) const = default;
};

MonteCarloSummary summarize(const MonteCarloReport& report);

struct RecedingSummary {
  std::size_t replans = 0;
  std::size_t converged = 0;
  double min_distance = 0.0;
  double mean_solve_seconds = 0.0;
  double max_solve_seconds = 0.0;
  bool operator==(const RecedingSummary&) const = default;
};

RecedingSummary summarize(const RecedingHorizonLog& log);

// Column names of the trajectory CSV after "t".
std::vector<std::string> csv_columns(const ScenarioSpec& spec);

// Each writer creates `dir` if needed and returns the paths it wrote.
// Throws IoError naming the path on failure.
std::vector<std::string> export_artifacts(const ScenarioSpec& spec,
                                          const SolveResult& result,
                                          const std::string& dir);
std::vector<std::string> export_artifacts(const ScenarioSpec& spec,
                                          const MonteCarloReport& report,
                                          const std::string& dir);
std::vector<std::string> export_artifacts(const ScenarioSpec& spec,
                                          const RecedingHorizonLog& log,
                                          const std::string& dir);

// Summaries recomputed from a written report.json.
SolveSummary read_solve_summary(const std::string& report_path);
MonteCarloSummary read_monte_carlo_summary(const std::string& report_path);
RecedingSummary read_receding_summary(const std::string& report_path);

std::string trajectory_svg(const ScenarioSpec& spec,
                           const std::vector<VectorXd>& states);

}  // namespace ilqgame
