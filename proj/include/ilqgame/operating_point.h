#pragma once

#include <vector>

#include "ilqgame/types.h"

namespace ilqgame {

// A trajectory iterate: states and every player's controls at each step of
// the time grid. states[0] is the initial state.
struct OperatingPoint {
  Time dt = 0.1;
  std::vector<VectorXd> states;
  std::vector<ControlSet> controls;

  std::size_t num_steps() const { return states.size(); }
  const VectorXd& initial_state() const { return states.front(); }
  Time time_at(std::size_t k) const { return static_cast<Time>(k) * dt; }

  // All-zero controls and states of the right shapes.
  static OperatingPoint zeros(Index state_dim,
                              const std::vector<Index>& control_dims,
                              std::size_t num_steps, Time dt);
};

}  // namespace ilqgame
