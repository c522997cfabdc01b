#include "ilqgame/harness.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ilqgame/errors.h"

namespace ilqgame {
namespace {

std::string scenario_path(const std::string& name) {
  return std::string(ILQGAME_SCENARIO_DIR) + "/" + name + ".json";
}

std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("ilqgame_harness_test_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

OperatingPoint constant_trajectory(double value, std::size_t steps = 5,
                                   Index n = 3) {
  OperatingPoint op;
  for (std::size_t k = 0; k < steps; ++k) {
    op.states.push_back(VectorXd::Constant(n, value));
    op.controls.push_back({VectorXd::Zero(1)});
  }
  return op;
}

TEST(Seeds, DerivedSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(derive_seed(42, 3), derive_seed(42, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(42, s));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Sinusoids, SameSeedSameSequence) {
  const TimeDiscretization time(0.1, 10.0);
  const SinusoidRanges ranges;
  const auto a = sample_sinusoidal_strategy(7, 1, 2, time, ranges);
  const auto b = sample_sinusoidal_strategy(7, 1, 2, time, ranges);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
  const auto c = sample_sinusoidal_strategy(8, 1, 2, time, ranges);
  const auto d = sample_sinusoidal_strategy(7, 2, 2, time, ranges);
  EXPECT_NE(a[5], c[5]);
  EXPECT_NE(a[5], d[5]);
}

TEST(Sinusoids, ZeroAmplitudeGivesZeroControls) {
  SinusoidRanges ranges;
  ranges.amplitude_min = ranges.amplitude_max = 0.0;
  for (const VectorXd& u :
       sample_sinusoidal_strategy(3, 0, 2, TimeDiscretization(0.1, 5.0), ranges))
    EXPECT_EQ(u, VectorXd::Zero(2));
}

TEST(Sinusoids, MatchTheSinusoidForm) {
  SinusoidRanges ranges;
  ranges.amplitude_min = ranges.amplitude_max = 0.3;
  ranges.frequency_min = ranges.frequency_max = 0.25;
  ranges.phase_min = ranges.phase_max = 0.5;
  const TimeDiscretization time(0.1, 4.0);
  const auto u = sample_sinusoidal_strategy(11, 0, 1, time, ranges);
  for (std::size_t k = 0; k < u.size(); ++k)
    EXPECT_NEAR(u[k](0),
                0.3 * std::sin(2.0 * M_PI * 0.25 * time.time_at(k) + 0.5),
                1e-14);

  SinusoidRanges wide;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    for (const VectorXd& v : sample_sinusoidal_strategy(seed, 0, 2, time, wide))
      EXPECT_LE(v.cwiseAbs().maxCoeff(), wide.amplitude_max);
}

TEST(Clustering, IdenticalTrajectoriesFormOneCluster) {
  const std::vector<OperatingPoint> trajectories(6, constant_trajectory(1.0));
  const Clustering c = cluster_trajectories(trajectories, 0.1, 2);
  ASSERT_EQ(c.clusters.size(), 1u);
  EXPECT_EQ(c.clusters[0].members.size(), 6u);
  EXPECT_TRUE(c.outliers.empty());
}

TEST(Clustering, WellSeparatedGroupsFormTwoClusters) {
  const double threshold = 1.0;
  std::vector<OperatingPoint> trajectories;
  for (int s = 0; s < 8; ++s)
    trajectories.push_back(constant_trajectory(s % 2 == 0 ? 0.0 + 0.01 * s
                                                          : 10.0 + 0.01 * s));
  const Clustering c = cluster_trajectories(trajectories, threshold);
  ASSERT_EQ(c.clusters.size(), 2u);
  EXPECT_EQ(c.clusters[0].members, (std::vector<std::size_t>{0, 2, 4, 6}));
  EXPECT_EQ(c.clusters[1].members, (std::vector<std::size_t>{1, 3, 5, 7}));
  EXPECT_EQ(c.clusters[0].representative, 0u);
}

TEST(Clustering, SmallClustersBecomeOutliersAndCountsAddUp) {
  std::vector<OperatingPoint> trajectories;
  for (int s = 0; s < 5; ++s) trajectories.push_back(constant_trajectory(0.0));
  trajectories.push_back(constant_trajectory(50.0));
  for (int s = 0; s < 3; ++s) trajectories.push_back(constant_trajectory(100.0));
  const Clustering c = cluster_trajectories(trajectories, 1.0, 2);
  ASSERT_EQ(c.clusters.size(), 2u);
  EXPECT_EQ(c.clusters[0].members.size(), 5u);
  EXPECT_EQ(c.clusters[1].members.size(), 3u);
  EXPECT_EQ(c.outliers, (std::vector<std::size_t>{5}));
}

TEST(Clustering, DistanceIsStackedEuclidean) {
  const OperatingPoint a = constant_trajectory(0.0, 4, 3);
  const OperatingPoint b = constant_trajectory(1.0, 4, 3);
  EXPECT_DOUBLE_EQ(trajectory_distance(a, b), std::sqrt(12.0));
}

TEST(Clustering, MismatchedLengthsAreRejected) {
  const std::vector<OperatingPoint> trajectories = {constant_trajectory(0.0, 5),
                                                    constant_trajectory(0.0, 6)};
  EXPECT_THROW(cluster_trajectories(trajectories, 1.0), InvalidArgument);
}

TEST(PassingSignature, RecordsSideOfEachCrossing) {
  const MultiPlayerSystem system(
      {PlayerModel::unicycle(), PlayerModel::unicycle(), PlayerModel::unicycle()});
  OperatingPoint op;
  for (int k = 0; k <= 10; ++k) {
    const double s = k / 10.0;
    VectorXd x = VectorXd::Zero(12);
    x.segment<2>(0) << -2.0 + 4.0 * s, 0.3;   // moves right, above
    x.segment<2>(4) << 2.0 - 4.0 * s, -0.3;   // moves left, below
    x.segment<2>(8) << -3.0 + 0.1 * s, 0.0;   // stays to the left of both
    op.states.push_back(x);
  }
  EXPECT_EQ(passing_signature(op, system), "+..");
  EXPECT_NEAR(min_pairwise_distance(op.states, system), 0.6, 1e-12);
}

class HallwayHarness : public ::testing::Test {
 protected:
  void SetUp() override { spec = load_scenario(scenario_path("hallway")); }
  ScenarioSpec spec;
};

TEST_F(HallwayHarness, SingleZeroAmplitudeSampleIsOneCluster) {
  spec.sampling.amplitude_min = spec.sampling.amplitude_max = 0.0;
  spec.clustering.min_size = 1;
  const MonteCarloReport report = run_monte_carlo(spec, 1, 5);
  ASSERT_EQ(report.samples.size(), 1u);
  if (report.samples[0].converged) {
    ASSERT_EQ(report.clusters.size(), 1u);
    EXPECT_EQ(report.clusters[0].members, (std::vector<std::size_t>{0}));
    EXPECT_EQ(report.clusters[0].mean_cost.size(),
              report.samples[0].costs.size());
    for (const auto& row : report.clusters[0].stddev_cost)
      for (double v : row) EXPECT_NEAR(v, 0.0, 1e-9);
  } else {
    ADD_FAILURE() << "zero initialization did not converge";
  }
}

TEST_F(HallwayHarness, MonteCarloIsDeterministicAcrossThreadCounts) {
  const MonteCarloReport a = run_monte_carlo(spec, 4, 99, 1);
  const MonteCarloReport b = run_monte_carlo(spec, 4, 99, 3);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t s = 0; s < a.samples.size(); ++s) {
    EXPECT_EQ(a.samples[s].seed, b.samples[s].seed);
    EXPECT_EQ(a.samples[s].converged, b.samples[s].converged);
    EXPECT_EQ(a.samples[s].iterations, b.samples[s].iterations);
    EXPECT_EQ(a.samples[s].costs, b.samples[s].costs);
    ASSERT_EQ(a.samples[s].trajectory.states.size(),
              b.samples[s].trajectory.states.size());
    for (std::size_t k = 0; k < a.samples[s].trajectory.states.size(); ++k)
      EXPECT_EQ(a.samples[s].trajectory.states[k],
                b.samples[s].trajectory.states[k]);
  }
  EXPECT_TRUE(summarize(a) == summarize(b));

  std::size_t accounted = a.outliers.size();
  for (const ClusterStats& c : a.clusters) accounted += c.members.size();
  EXPECT_EQ(accounted, a.converged_count());
  EXPECT_LE(a.converged_count(), a.num_samples);
}

TEST_F(HallwayHarness, SolveExportHasNormativeShape) {
  spec.solver.max_iterations = 20;
  const Problem p = build_problem(spec);
  StrategySet zeros;
  for (PlayerIndex i = 0; i < 3; ++i)
    zeros.push_back(AffineStrategy::zeros(100, 2, 12));
  const SolveResult result = ilq_solve(p.system, p.costs, p.x0, zeros, p.config);
  const std::string dir = temp_dir("solve");
  const auto files = export_artifacts(spec, result, dir);
  ASSERT_EQ(files.size(), 3u);

  std::ifstream csv(dir + "/trajectory.csv");
  std::string header, line;
  std::getline(csv, header);
  EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, 1 + 12 + 6);
  EXPECT_EQ(header.rfind("t,P1.px,P1.py,P1.theta,P1.v,P1.omega,P1.accel,P2.px",
                         0),
            0u);
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ',') + 1, 19);
    ++rows;
  }
  EXPECT_EQ(rows, 100u);

  const std::string svg = read_text(dir + "/trajectory.svg");
  std::size_t paths = 0;
  for (auto at = svg.find("<path"); at != std::string::npos;
       at = svg.find("<path", at + 1))
    ++paths;
  EXPECT_EQ(paths, 3u);

  EXPECT_TRUE(read_solve_summary(dir + "/report.json") == summarize(result, p));
}

TEST_F(HallwayHarness, MonteCarloReportRoundTrips) {
  const MonteCarloReport report = run_monte_carlo(spec, 3, 4);
  const std::string dir = temp_dir("montecarlo");
  export_artifacts(spec, report, dir);
  EXPECT_TRUE(read_monte_carlo_summary(dir + "/report.json") ==
              summarize(report));
}

TEST_F(HallwayHarness, UnwritableDirectoryNamesThePath) {
  const std::string file = temp_dir("blocker");
  std::ofstream(file) << "not a directory";
  SolveResult empty;
  try {
    export_artifacts(spec, empty, file + "/out");
    ADD_FAILURE() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(e.path().find("blocker"), std::string::npos);
  }
}

// One robot with nobody else around.
ScenarioSpec lone_robot(double x, double y, double speed) {
  return parse_scenario(R"({
    "name": "lone",
    "time": {"dt": 0.1, "horizon": 3.0},
    "solver": {"step_size": 0.5},
    "players": [{
      "name": "robot",
      "model": {"kind": "unicycle4d"},
      "initial_state": [)" + std::to_string(x) + ", " + std::to_string(y) +
                        ", 0.0, " + std::to_string(speed) + R"(],
      "goal": [0.0, 0.0],
      "costs": [
        {"kind": "goal", "weight": 1.0, "window": 3.0},
        {"kind": "control", "weight": 1.0, "diagonal": [1.0, 1.0]}
      ]
    }]
  })");
}

TEST(RecedingHorizon, StaticSceneKeepsReplanningTheSamePlan) {
  const ScenarioSpec spec = lone_robot(0.0, 0.0, 0.0);
  const RecedingHorizonLog log = run_receding_horizon(spec, 2.0, 0.25);
  ASSERT_EQ(log.replans.size(), 8u);
  for (std::size_t r = 1; r < log.replans.size(); ++r) {
    EXPECT_TRUE(log.replans[r].converged);
    ASSERT_EQ(log.replans[r].plan.states.size(),
              log.replans[0].plan.states.size());
    for (std::size_t k = 0; k < log.replans[r].plan.states.size(); ++k)
      EXPECT_EQ(log.replans[r].plan.states[k], log.replans[0].plan.states[k]);
  }
}

TEST(RecedingHorizon, TraceIsFeasibleAndContinuous) {
  const ScenarioSpec spec = lone_robot(-3.0, 1.0, 0.5);
  const RecedingHorizonLog log = run_receding_horizon(spec, 2.0, 0.25);
  const Problem p = build_problem(spec);

  for (std::size_t r = 0; r < log.replans.size(); ++r) {
    EXPECT_NEAR(log.replans[r].time, 0.25 * static_cast<double>(r), 1e-12);
  }
  const ExecutedTrace& trace = log.trace;
  ASSERT_EQ(trace.states.size(), trace.controls.size() + 1);
  double total = 0.0;
  for (std::size_t k = 0; k < trace.controls.size(); ++k) {
    const VectorXd next = integrate_step(p.system, trace.times[k],
                                         trace.states[k], trace.controls[k],
                                         trace.durations[k]);
    EXPECT_LT((next - trace.states[k + 1]).cwiseAbs().maxCoeff(), 1e-9);
    if (k > 0) EXPECT_NEAR(trace.times[k], trace.times[k - 1] + trace.durations[k - 1], 1e-12);
    total += trace.durations[k];
  }
  EXPECT_NEAR(total, 2.0, 1e-9);

  // Each plan starts from the executed state at its replan time.
  std::size_t step = 0;
  for (const ReplanRecord& r : log.replans) {
    while (step < trace.times.size() && trace.times[step] < r.time - 1e-9) ++step;
    EXPECT_EQ(r.state, trace.states[step]);
    EXPECT_EQ(r.plan.states[0], r.state);
  }
}

TEST(RecedingHorizon, ShiftPlanReplicatesTheLastStep) {
  OperatingPoint plan;
  plan.dt = 0.1;
  StrategySet strategies(1);
  for (int k = 0; k < 10; ++k) {
    plan.states.push_back(VectorXd::Constant(2, k));
    plan.controls.push_back({VectorXd::Constant(1, 10 + k)});
    strategies[0].P.push_back(MatrixXd::Constant(1, 2, k));
    strategies[0].alpha.push_back(VectorXd::Constant(1, 1.0));
  }
  const auto [anchor, shifted] = shift_plan(plan, strategies, 0.25);
  ASSERT_EQ(anchor.num_steps(), 10u);
  EXPECT_NEAR(anchor.states[0](0), 2.5, 1e-12);
  EXPECT_EQ(anchor.controls[0][0](0), 12.0);
  EXPECT_EQ(shifted[0].P[0](0, 0), 2.0);
  EXPECT_EQ(anchor.states[9](0), 9.0);
  EXPECT_EQ(anchor.controls[9][0](0), 19.0);
  EXPECT_EQ(shifted[0].P[9](0, 0), 9.0);
  for (const VectorXd& a : shifted[0].alpha) EXPECT_EQ(a(0), 0.0);
}

TEST(RecedingHorizon, DisturbanceChangesLaterPlans) {
  ScenarioSpec calm = load_scenario(scenario_path("collision_avoidance"));
  calm.receding->disturbances.clear();
  ScenarioSpec disturbed = calm;
  disturbed.receding->disturbances.push_back(
      Disturbance{2, 1.0, 1.0, VectorXd::Constant(1, -1.0)});

  const RecedingHorizonLog a = run_receding_horizon(calm, 3.0, 0.25);
  const RecedingHorizonLog b = run_receding_horizon(disturbed, 3.0, 0.25);
  ASSERT_EQ(a.replans.size(), b.replans.size());
  for (std::size_t r = 0; r < a.replans.size(); ++r) {
    const double gap = trajectory_distance(a.replans[r].plan, b.replans[r].plan);
    if (a.replans[r].time <= 1.0) {
      EXPECT_EQ(gap, 0.0) << "replan " << r;
    } else {
      EXPECT_GT(gap, 1e-3) << "replan " << r;
    }
  }
}

TEST(RecedingHorizon, RejectsBadIntervals) {
  const ScenarioSpec spec = lone_robot(0.0, 0.0, 0.0);
  EXPECT_THROW(run_receding_horizon(spec, 0.0, 0.25), InvalidArgument);
  EXPECT_THROW(run_receding_horizon(spec, 1.0, -1.0), InvalidArgument);
}

TEST(RecedingHorizon, ReportRoundTrips) {
  const ScenarioSpec spec = lone_robot(-3.0, 1.0, 0.5);
  const RecedingHorizonLog log = run_receding_horizon(spec, 1.0, 0.25);
  const std::string dir = temp_dir("receding");
  export_artifacts(spec, log, dir);
  EXPECT_TRUE(read_receding_summary(dir + "/report.json") == summarize(log));
}

}  // namespace
}  // namespace ilqgame
