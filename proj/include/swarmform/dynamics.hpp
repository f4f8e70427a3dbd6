#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "swarmform/core.hpp"
#include "swarmform/vec2.hpp"

namespace swarmform {

/// Separation below which two agents are treated as coincident and exert no
/// repulsion on each other.
inline constexpr double kCoincidenceEps = 1e-9;

/// k * (xj - xi) / (sigma^2 + |xj - xi|^2)^beta
inline Vec2 foraging_term(const Vec2& xi, const Vec2& xj, double k, double sigma, double beta) {
  const Vec2 d = xj - xi;
  const double denom = std::pow(sigma * sigma + norm_squared(d), beta);
  return d * (k / denom);
}

/// Index of the agent closest to agent `i`; ties go to the lowest index.
/// Empty when there is no other agent.
inline std::optional<std::size_t> nearest_neighbor(std::size_t i, std::span<const Vec2> positions) {
  std::optional<std::size_t> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == i) continue;
    const double d2 = norm_squared(positions[j] - positions[i]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

inline std::optional<std::size_t> nearest_neighbor(std::size_t i, const SwarmState& state) {
  const auto pos = state.positions();
  return nearest_neighbor(i, std::span<const Vec2>(pos));
}

inline bool coincident(const Vec2& xi, const Vec2& xn) { return norm(xi - xn) < kCoincidenceEps; }

/// r * unit(xi - xn); zero when the two points coincide.
inline Vec2 repulsion_term(const Vec2& xi, const Vec2& xn, double r) {
  if (r == 0.0) return {};
  const Vec2 d = xi - xn;
  const double len = norm(d);
  if (len < kCoincidenceEps) return {};
  return d * (r / len);
}

struct VelocityField {
  std::vector<Vec2> velocities;
  // Agents whose nearest neighbour sat on top of them, so repulsion was dropped.
  std::size_t coincidences = 0;
};

/// Velocity of agent `i` under the shape-formation field:
/// pairwise foraging attraction (gain k1), attraction to the agent's target
/// (gain k2) and a repulsion of magnitude r from its nearest neighbour.
///
/// `target_of(position, heading)` returns the target vector; the heading is the
/// fallback direction for agents exactly on the formation center.
/// `coincidences`, when given, is incremented if the repulsion was dropped.
template <class TargetFn>
Vec2 shape_velocity(std::size_t i, std::span<const Vec2> positions, std::span<const Vec2> headings,
                    const DynamicsParams& params, const TargetFn& target_of,
                    std::size_t* coincidences = nullptr) {
  const Vec2 xi = positions[i];
  Vec2 v;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == i) continue;
    v += foraging_term(xi, positions[j], params.k1, params.sigma, params.beta);
  }
  v += foraging_term(xi, target_of(xi, headings[i]), params.k2, params.sigma, params.beta);
  if (params.r > 0.0) {
    if (const auto n = nearest_neighbor(i, positions)) {
      const Vec2 xn = positions[*n];
      if (coincident(xi, xn)) {
        if (coincidences != nullptr) ++*coincidences;
      } else {
        v += repulsion_term(xi, xn, params.r);
      }
    }
  }
  return v;
}

namespace detail {

inline std::vector<Vec2> headings_of(const SwarmState& state) {
  std::vector<Vec2> out;
  out.reserve(state.size());
  for (const auto& a : state.agents) out.push_back(a.heading);
  return out;
}

}  // namespace detail

template <class TargetFn>
Vec2 shape_velocity(std::size_t i, const SwarmState& state, const DynamicsParams& params, const TargetFn& target_of) {
  const auto pos = state.positions();
  const auto head = detail::headings_of(state);
  return shape_velocity(i, std::span<const Vec2>(pos), std::span<const Vec2>(head), params, target_of);
}

/// All velocities, evaluated from the same positions (synchronous update).
template <class TargetFn>
VelocityField compute_velocities(std::span<const Vec2> positions, std::span<const Vec2> headings,
                                 const DynamicsParams& params, const TargetFn& target_of) {
  VelocityField field;
  field.velocities.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    field.velocities.push_back(shape_velocity(i, positions, headings, params, target_of, &field.coincidences));
  }
  return field;
}

template <class TargetFn>
VelocityField compute_velocities(const SwarmState& state, const DynamicsParams& params, const TargetFn& target_of) {
  const auto pos = state.positions();
  const auto head = detail::headings_of(state);
  return compute_velocities(std::span<const Vec2>(pos), std::span<const Vec2>(head), params, target_of);
}

/// Unmodified foraging field: attraction to every other agent and to the
/// optimum `p`, all with the single gain `k`.
inline Vec2 baseline_velocity(std::size_t i, std::span<const Vec2> positions, const Vec2& p, double k, double sigma,
                              double beta) {
  const Vec2 xi = positions[i];
  Vec2 v;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == i) continue;
    v += foraging_term(xi, positions[j], k, sigma, beta);
  }
  return v + foraging_term(xi, p, k, sigma, beta);
}

inline Vec2 baseline_velocity(std::size_t i, const SwarmState& state, const Vec2& p, double k, double sigma,
                              double beta) {
  const auto pos = state.positions();
  return baseline_velocity(i, std::span<const Vec2>(pos), p, k, sigma, beta);
}

}  // namespace swarmform
