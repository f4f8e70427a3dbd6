#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <type_traits>
#include <variant>

#include "swarmform/core.hpp"
#include "swarmform/shapes.hpp"
#include "swarmform/vec2.hpp"

namespace swarmform {

struct StaticCenter {
  Vec2 c;

  void validate() const {
    if (!is_finite(c)) throw ConfigError("center must be finite");
  }
  friend bool operator==(const StaticCenter&, const StaticCenter&) = default;
};

/// C(t) = c0 + v*t, with v in units per iteration.
struct LinearCenter {
  Vec2 c0{-10.0, -10.0};
  Vec2 v{0.1, 0.1};

  void validate() const {
    if (!is_finite(c0) || !is_finite(v)) throw ConfigError("linear center c0 and v must be finite");
  }
  friend bool operator==(const LinearCenter&, const LinearCenter&) = default;
};

/// Uniform motion on the origin-centred circle of radius `radius`, starting
/// at (radius, 0) and completing one turn every `period` iterations.
struct CircularCenter {
  double radius = 6.0;
  int period = 200;

  void validate() const {
    if (!(std::isfinite(radius) && radius > 0.0)) throw ConfigError("circular center radius must be > 0");
    if (period < 1) throw ConfigError("circular center period must be >= 1");
  }
  friend bool operator==(const CircularCenter&, const CircularCenter&) = default;
};

using CenterTrajectory = std::variant<StaticCenter, LinearCenter, CircularCenter>;

inline void validate(const CenterTrajectory& traj) {
  std::visit([](const auto& c) { c.validate(); }, traj);
}

inline std::string_view center_name(const CenterTrajectory& traj) {
  constexpr std::string_view names[] = {"static", "linear", "circular"};
  return names[traj.index()];
}

inline Vec2 center_at(const CenterTrajectory& traj, double t) {
  return std::visit(
      [t](const auto& c) -> Vec2 {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StaticCenter>) {
          return c.c;
        } else if constexpr (std::is_same_v<T, LinearCenter>) {
          return c.c0 + c.v * t;
        } else {
          const double angle = 2.0 * std::numbers::pi * t / static_cast<double>(c.period);
          return {c.radius * std::cos(angle), c.radius * std::sin(angle)};
        }
      },
      traj);
}

/// Circle target recentred on a moving point: center + r0 * unit(pos - center).
inline Vec2 tracking_target(const Vec2& pos, const Vec2& center, double r0, const Vec2& fallback = {1.0, 0.0}) {
  return circle_target(pos - center, r0, fallback) + center;
}

/// A shape carried by a (possibly moving) center. The target of an agent is
/// the shape's target for its position relative to the center, shifted back.
struct Formation {
  ShapeSpec shape = Circle{};
  CenterTrajectory center = StaticCenter{};

  void validate() const {
    swarmform::validate(shape);
    swarmform::validate(center);
    if (tracking() && !std::holds_alternative<Circle>(shape))
      throw ConfigError("a center other than the fixed origin requires shape = circle");
  }

  /// True when the center is anything other than a fixed origin.
  bool tracking() const {
    if (const auto* s = std::get_if<StaticCenter>(&center)) return !is_zero(s->c);
    return true;
  }

  Vec2 center_at(double t) const { return swarmform::center_at(center, t); }

  Vec2 target(const Vec2& pos, double t, const Vec2& fallback = {1.0, 0.0}) const {
    const Vec2 c = center_at(t);
    return shape_target(pos - c, shape, fallback) + c;
  }

  double distance(const Vec2& pos, double t) const { return distance_to_shape(pos - center_at(t), shape); }

  friend bool operator==(const Formation&, const Formation&) = default;
};

}  // namespace swarmform
