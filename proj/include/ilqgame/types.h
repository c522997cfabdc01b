#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace ilqgame {

using Index = Eigen::Index;
using PlayerIndex = std::size_t;
using Time = double;

using Eigen::MatrixXd;
using Eigen::VectorXd;

// One control vector per player, in player order.
using ControlSet = std::vector<VectorXd>;

// Uniform time grid. Step k sits at time k * dt for k in [0, num_steps).
struct TimeDiscretization {
  Time dt = 0.1;
  Time horizon = 10.0;

  TimeDiscretization() = default;
  TimeDiscretization(Time dt, Time horizon);

  std::size_t num_steps() const;
  Time time_at(std::size_t k) const { return static_cast<Time>(k) * dt; }
};

}  // namespace ilqgame
