#include "ilqgame/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ilqgame/errors.h"

namespace ilqgame {

Polyline2::Polyline2(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 2)
    throw InvalidArgument("polyline needs at least two points");
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    if (!points_[k].allFinite())
      throw InvalidArgument("polyline point is not finite");
    if ((points_[k + 1] - points_[k]).norm() == 0.0)
      throw InvalidArgument("polyline has a zero-length segment");
  }
}

Point2 Polyline2::direction(std::size_t segment) const {
  return (points_[segment + 1] - points_[segment]).normalized();
}

Polyline2::Closest Polyline2::closest(const Point2& p) const {
  constexpr double kTieTolerance = 1e-12;
  Closest best;
  best.distance = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Point2>> candidates;
  candidates.reserve(num_segments());

  for (std::size_t k = 0; k < num_segments(); ++k) {
    const Point2& a = points_[k];
    const Point2 ab = points_[k + 1] - a;
    const double s = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    const Point2 c = a + s * ab;
    const double d = (p - c).norm();
    candidates.emplace_back(d, c);
    if (d < best.distance) {
      best.distance = d;
      best.point = c;
      best.segment = k;
      best.at_vertex = (s == 0.0 || s == 1.0);
      const std::size_t vertex = (s == 0.0) ? k : k + 1;
      best.at_interior_vertex =
          best.at_vertex && vertex > 0 && vertex + 1 < points_.size();
    }
  }

  const double tol = kTieTolerance * (1.0 + best.distance);
  for (const auto& [d, c] : candidates) {
    if (std::abs(d - best.distance) <= tol && (c - best.point).norm() > tol) {
      best.ambiguous = true;
      break;
    }
  }
  return best;
}

}  // namespace ilqgame
