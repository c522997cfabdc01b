#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ilqgame {

// Bad dimensions, bad indices, bad configuration values.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN or Inf handed to a routine that requires finite input.
class NumericalInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A cost was evaluated where its derivative is undefined (polyline kink,
// coincident players).
class DegenerateGeometryError : public std::domain_error {
 public:
  explicit DegenerateGeometryError(const std::string& what,
                                   std::optional<std::size_t> time_index = {});
  std::optional<std::size_t> time_index() const { return time_index_; }

 private:
  std::optional<std::size_t> time_index_;
};

// The stacked linear system of an LQ game stage is singular or too badly
// conditioned to trust.
class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, std::size_t time_index);
  std::size_t time_index() const { return time_index_; }

 private:
  std::size_t time_index_;
};

// A rollout produced a non-finite state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t time_index,
                  std::optional<std::size_t> iteration = {});
  std::size_t time_index() const { return time_index_; }
  std::optional<std::size_t> iteration() const { return iteration_; }

 private:
  std::size_t time_index_;
  std::optional<std::size_t> iteration_;
};

// Scenario configuration could not be read. `field()` is the dotted path of
// the offending entry; `line()` is set when the document itself is malformed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string field,
             std::optional<std::size_t> line = {});
  const std::string& field() const { return field_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
};

// A receding-horizon episode stopped because a replan failed outright.
class EpisodeError : public std::runtime_error {
 public:
  EpisodeError(const std::string& what, std::size_t replan_index);
  std::size_t replan_index() const { return replan_index_; }

 private:
  std::size_t replan_index_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace ilqgame
