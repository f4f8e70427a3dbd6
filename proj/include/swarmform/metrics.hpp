#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "swarmform/dynamics.hpp"
#include "swarmform/shapes.hpp"
#include "swarmform/tracking.hpp"
#include "swarmform/vec2.hpp"

namespace swarmform {

struct StepMetrics {
  double shape_error = 0.0;      // mean distance to the shape
  double max_shape_error = 0.0;  // worst agent
  double spacing_cv = 0.0;       // stddev / mean of nearest-neighbour distances
  double max_speed = 0.0;        // largest |velocity| at this state
  std::optional<double> tracking_error;
  std::optional<double> centroid_offset;

  friend bool operator==(const StepMetrics&, const StepMetrics&) = default;
};

inline double shape_error(std::span<const Vec2> positions, const ShapeSpec& shape) {
  double sum = 0.0;
  for (const auto& p : positions) sum += distance_to_shape(p, shape);
  return sum / static_cast<double>(positions.size());
}

inline double shape_error(const SwarmState& state, const ShapeSpec& shape) {
  const auto pos = state.positions();
  return shape_error(std::span<const Vec2>(pos), shape);
}

/// Nearest-neighbour distance of every agent (brute-force scan).
inline std::vector<double> nearest_neighbor_distances(std::span<const Vec2> positions) {
  std::vector<double> d(positions.size(), 0.0);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (const auto n = nearest_neighbor(i, positions)) d[i] = distance(positions[i], positions[*n]);
  }
  return d;
}

/// Coefficient of variation (population stddev over mean) of the
/// nearest-neighbour distances.
///
/// Fewer than two agents give 0. When every agent sits on top of another the
/// mean is 0 and the ratio undefined; the result is then sqrt(M - 1), the
/// largest coefficient of variation any M non-negative values can reach.
inline double spacing_cv(std::span<const Vec2> positions) {
  const std::size_t m = positions.size();
  if (m < 2) return 0.0;
  const auto d = nearest_neighbor_distances(positions);
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(m);
  if (mean == 0.0) return std::sqrt(static_cast<double>(m - 1));
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  var /= static_cast<double>(m);
  return std::sqrt(var) / mean;
}

inline double spacing_cv(const SwarmState& state) {
  const auto pos = state.positions();
  return spacing_cv(std::span<const Vec2>(pos));
}

/// Mean of | |xi - center| - r0 |.
inline double tracking_error(std::span<const Vec2> positions, const Vec2& center, double r0) {
  double sum = 0.0;
  for (const auto& p : positions) sum += std::abs(distance(p, center) - r0);
  return sum / static_cast<double>(positions.size());
}

inline double tracking_error(const SwarmState& state, const Vec2& center, double r0) {
  const auto pos = state.positions();
  return tracking_error(std::span<const Vec2>(pos), center, r0);
}

inline Vec2 centroid(std::span<const Vec2> positions) {
  Vec2 sum;
  for (const auto& p : positions) sum += p;
  return sum / static_cast<double>(positions.size());
}

inline double centroid_offset(std::span<const Vec2> positions, const Vec2& center) {
  return distance(centroid(positions), center);
}

inline double centroid_offset(const SwarmState& state, const Vec2& center) {
  const auto pos = state.positions();
  return centroid_offset(std::span<const Vec2>(pos), center);
}

/// All observables for one snapshot. Tracking fields are filled only for
/// formations with a non-trivial center.
inline StepMetrics compute_step_metrics(std::span<const Vec2> positions, std::span<const Vec2> velocities,
                                        const Formation& formation, double t) {
  StepMetrics out;
  const Vec2 c = formation.center_at(t);
  double sum = 0.0;
  for (const auto& p : positions) {
    const double d = distance_to_shape(p - c, formation.shape);
    sum += d;
    out.max_shape_error = std::max(out.max_shape_error, d);
  }
  out.shape_error = sum / static_cast<double>(positions.size());
  out.spacing_cv = spacing_cv(positions);
  for (const auto& v : velocities) out.max_speed = std::max(out.max_speed, norm(v));
  if (formation.tracking()) {
    if (const auto* circle = std::get_if<Circle>(&formation.shape)) {
      out.tracking_error = tracking_error(positions, c, circle->r0);
      out.centroid_offset = centroid_offset(positions, c);
    }
  }
  return out;
}

}  // namespace swarmform
