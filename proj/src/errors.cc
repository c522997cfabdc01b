#include "ilqgame/errors.h"

#include <cmath>
#include <utility>

#include "ilqgame/types.h"

namespace ilqgame {

TimeDiscretization::TimeDiscretization(Time dt, Time horizon)
    : dt(dt), horizon(horizon) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvalidArgument("time step must be positive and finite");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidArgument("horizon must be positive and finite");
  if (num_steps() < 1)
    throw InvalidArgument("horizon shorter than one time step");
}

std::size_t TimeDiscretization::num_steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

DegenerateGeometryError::DegenerateGeometryError(
    const std::string& what, std::optional<std::size_t> time_index)
    : std::domain_error(time_index ? what + " (time step " +
                                         std::to_string(*time_index) + ")"
                                   : what),
      time_index_(time_index) {}

SolveFailure::SolveFailure(const std::string& what, std::size_t time_index)
    : std::runtime_error(what + " (time step " + std::to_string(time_index) +
                         ")"),
      time_index_(time_index) {}

DivergenceError::DivergenceError(const std::string& what,
                                 std::size_t time_index,
                                 std::optional<std::size_t> iteration)
    : std::runtime_error(
          what + " (time step " + std::to_string(time_index) +
          (iteration ? ", iteration " + std::to_string(*iteration) : "") +
          ")"),
      time_index_(time_index),
      iteration_(iteration) {}

ParseError::ParseError(const std::string& what, std::string field,
                       std::optional<std::size_t> line)
    : std::runtime_error(
          (line ? "line " + std::to_string(*line) + ": " : std::string()) +
          (field.empty() ? what : field + ": " + what)),
      field_(std::move(field)),
      line_(line) {}

IoError::IoError(const std::string& what, std::string path)
    : std::runtime_error(what + ": " + path), path_(std::move(path)) {}

EpisodeError::EpisodeError(const std::string& what, std::size_t replan_index)
    : std::runtime_error(what + " (replan " + std::to_string(replan_index) +
                         ")"),
      replan_index_(replan_index) {}

}  // namespace ilqgame
