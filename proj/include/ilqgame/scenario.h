#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ilqgame/cost.h"
#include "ilqgame/dynamics.h"
#include "ilqgame/geometry.h"
#include "ilqgame/solver.h"
#include "ilqgame/types.h"

namespace ilqgame {

struct PlayerSpec {
  std::string name;
  PlayerModel model;
  VectorXd initial_state;
  std::optional<Point2> goal;
  std::vector<CostPrimitive> costs;
  double state_regularization = 0.0;
  double control_regularization = 0.0;

  bool operator==(const PlayerSpec& o) const;
};

struct NamedLane {
  std::string name;
  Polyline2 centerline;
  bool operator==(const NamedLane&) const = default;
};

// Drawn in plots and used for bounds checks; costs carry their own copies.
struct Geometry {
  std::optional<double> hall_half_width;
  std::vector<NamedLane> lanes;
  std::optional<double> lane_half_width;
  bool operator==(const Geometry&) const = default;
};

// Ranges for random open-loop initializations u(t) = a sin(2 pi f t + phase).
struct SinusoidRanges {
  double amplitude_min = 0.0;
  double amplitude_max = 0.5;
  double frequency_min = 0.0;  // Hz
  double frequency_max = 0.5;
  double phase_min = 0.0;
  double phase_max = 6.283185307179586;
  bool operator==(const SinusoidRanges&) const = default;
};

struct ClusteringSpec {
  double threshold = 5.0;
  std::size_t min_size = 3;
  bool operator==(const ClusteringSpec&) const = default;
};

// Replaces one simulated agent's controls over [start, start + duration)
// during a receding-horizon episode.
struct Disturbance {
  PlayerIndex player = 0;
  Time start = 0.0;
  Time duration = 0.0;
  VectorXd control;
  bool operator==(const Disturbance& o) const {
    return player == o.player && start == o.start &&
           duration == o.duration && control.size() == o.control.size() &&
           control == o.control;
  }
};

struct RecedingSpec {
  Time episode = 20.0;
  Time replan_interval = 0.25;
  std::vector<Disturbance> disturbances;
  bool operator==(const RecedingSpec&) const = default;
};

struct ScenarioSpec {
  std::string name;
  std::vector<PlayerSpec> players;
  TimeDiscretization time;
  SolverConfig solver;  // solver.discretization mirrors `time`
  Geometry geometry;
  SinusoidRanges sampling;
  ClusteringSpec clustering;
  std::optional<RecedingSpec> receding;

  bool operator==(const ScenarioSpec& o) const;
};

struct Problem {
  MultiPlayerSystem system;
  std::vector<PlayerCost> costs;
  VectorXd x0;
  SolverConfig config;
};

// Parses and validates a scenario document. Throws ParseError carrying the
// dotted field path (and the line for malformed documents).
ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec load_scenario(const std::string& path);
std::string serialize_scenario(const ScenarioSpec& spec);

void validate_scenario(const ScenarioSpec& spec);

Problem build_problem(const ScenarioSpec& spec);

// Same game started from a different joint state.
Problem build_problem(const ScenarioSpec& spec, const VectorXd& x0);

}  // namespace ilqgame
