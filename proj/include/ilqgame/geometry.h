#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace ilqgame {

using Point2 = Eigen::Vector2d;

// Open polyline through at least two distinct points.
class Polyline2 {
 public:
  struct Closest {
    Point2 point;
    double distance = 0.0;
    std::size_t segment = 0;
    // Nearest point is a segment end rather than a segment interior.
    bool at_vertex = false;
    // Nearest point is a vertex shared by two segments.
    bool at_interior_vertex = false;
    // Another segment offers a different nearest point at the same distance.
    bool ambiguous = false;
  };

  Polyline2() = default;
  explicit Polyline2(std::vector<Point2> points);

  const std::vector<Point2>& points() const { return points_; }
  std::size_t num_segments() const { return points_.size() - 1; }
  Closest closest(const Point2& p) const;
  // Unit direction of a segment.
  Point2 direction(std::size_t segment) const;

  bool operator==(const Polyline2& other) const {
    return points_ == other.points_;
  }

 private:
  std::vector<Point2> points_;
};

}  // namespace ilqgame
