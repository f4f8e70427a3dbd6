#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>
#include <type_traits>
#include <variant>

#include "swarmform/core.hpp"
#include "swarmform/vec2.hpp"

namespace swarmform {

/// The line x2 = m*x1 + c.
struct Line {
  double m = 1.0;
  double c = 0.0;

  void validate() const {
    if (!(std::isfinite(m) && std::isfinite(c))) throw ConfigError("line m and c must be finite");
  }
  friend bool operator==(const Line&, const Line&) = default;
};

/// Origin-centred, axis-aligned ellipse (x1/a)^2 + (x2/b)^2 = 1.
struct Ellipse {
  double a = 4.0;
  double b = 2.0;

  void validate() const {
    if (!(std::isfinite(a) && a > 0.0)) throw ConfigError("ellipse a must be > 0");
    if (!(std::isfinite(b) && b > 0.0)) throw ConfigError("ellipse b must be > 0");
  }
  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

/// Origin-centred circle of radius r0.
struct Circle {
  double r0 = 4.0;

  void validate() const {
    if (!(std::isfinite(r0) && r0 > 0.0)) throw ConfigError("circle r0 must be > 0");
  }
  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Origin-centred, axis-aligned square with half side a.
struct Square {
  double a = 5.0;

  void validate() const {
    if (!(std::isfinite(a) && a > 0.0)) throw ConfigError("square a must be > 0");
  }
  friend bool operator==(const Square&, const Square&) = default;
};

using ShapeSpec = std::variant<Line, Ellipse, Circle, Square>;

inline void validate(const ShapeSpec& shape) {
  std::visit([](const auto& s) { s.validate(); }, shape);
}

inline std::string_view shape_name(const ShapeSpec& shape) {
  constexpr std::array<std::string_view, 4> names{"line", "ellipse", "circle", "square"};
  return names[shape.index()];
}

namespace detail {

// Points whose defining-equation residual is within a few ulps are treated as
// already on the shape, so the target of an on-shape point is bit-identical to
// the point itself.
inline constexpr double kOnShapeUlps = 16.0 * std::numeric_limits<double>::epsilon();

}  // namespace detail

/// Orthogonal projection of `pos` onto the line x2 = m*x1 + c.
inline Vec2 line_target(const Vec2& pos, double m, double c) {
  const double residual = pos.x2 - m * pos.x1 - c;
  const double scale = std::abs(pos.x2) + std::abs(m * pos.x1) + std::abs(c);
  if (std::abs(residual) <= detail::kOnShapeUlps * scale) return pos;
  const double denom = 1.0 + m * m;
  return {(pos.x1 + m * pos.x2 - m * c) / denom, (m * pos.x1 + m * m * pos.x2 + c) / denom};
}

/// Point (a*cos(theta), b*sin(theta)) of the ellipse, with theta the polar
/// angle of (b*x1, a*x2). At the origin the angle is taken from `fallback`.
inline Vec2 ellipse_target(Vec2 pos, double a, double b, const Vec2& fallback = {1.0, 0.0}) {
  if (is_zero(pos)) {
    pos = fallback;
  } else {
    const double u = pos.x1 / a;
    const double v = pos.x2 / b;
    if (std::abs(u * u + v * v - 1.0) <= detail::kOnShapeUlps) return pos;
  }
  const double theta = std::atan2(a * pos.x2, b * pos.x1);
  return {a * std::cos(theta), b * std::sin(theta)};
}

/// Radial projection onto the circle of radius r0. Defined as the ellipse
/// target with a = b = r0 so the two agree bit-for-bit.
inline Vec2 circle_target(const Vec2& pos, double r0, const Vec2& fallback = {1.0, 0.0}) {
  return ellipse_target(pos, r0, r0, fallback);
}

/// Radial projection onto the boundary of the square of half side `a`.
///
/// The four sectors of the polar angle phi are half-open,
/// [-pi/4, pi/4), [pi/4, 3pi/4), [-3pi/4, -pi/4) and the remainder, so each
/// corner ray belongs to exactly one side.
inline Vec2 square_target(Vec2 pos, double a, const Vec2& fallback = {1.0, 0.0}) {
  if (is_zero(pos)) {
    pos = fallback;
  } else if (std::abs(std::max(std::abs(pos.x1), std::abs(pos.x2)) - a) <= detail::kOnShapeUlps * a) {
    return pos;
  }
  constexpr double quarter = std::numbers::pi / 4.0;
  const double phi = std::atan2(pos.x2, pos.x1);
  if (phi >= -quarter && phi < quarter) {
    const double m = pos.x2 / pos.x1;
    return {a, m * a};
  }
  if (phi >= quarter && phi < 3.0 * quarter) {
    if (pos.x1 == 0.0) return {0.0, a};
    const double m = pos.x2 / pos.x1;
    return {a / m, a};
  }
  if (phi >= -3.0 * quarter && phi < -quarter) {
    if (pos.x1 == 0.0) return {0.0, -a};
    const double m = pos.x2 / pos.x1;
    return {-a / m, -a};
  }
  const double m = pos.x2 / pos.x1;
  return {-a, -m * a};
}

/// Target vector of `pos` for any shape.
inline Vec2 shape_target(const Vec2& pos, const ShapeSpec& shape, const Vec2& fallback = {1.0, 0.0}) {
  return std::visit(
      [&](const auto& s) -> Vec2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Line>) {
          return line_target(pos, s.m, s.c);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return ellipse_target(pos, s.a, s.b, fallback);
        } else if constexpr (std::is_same_v<T, Circle>) {
          return circle_target(pos, s.r0, fallback);
        } else {
          return square_target(pos, s.a, fallback);
        }
      },
      shape);
}

/// Distance from `pos` to the nearest point of the ellipse.
///
/// By symmetry the nearest point lies in the quadrant of |pos|. The squared
/// distance over theta in [0, pi/2] is bracketed on a coarse grid, narrowed by
/// golden-section search to 1e-10 in theta and then polished by safeguarded
/// Newton steps.
inline double ellipse_distance(const Vec2& pos, double a, double b) {
  const double u = std::abs(pos.x1);
  const double v = std::abs(pos.x2);
  auto f = [&](double t) {
    const double dx = u - a * std::cos(t);
    const double dy = v - b * std::sin(t);
    return dx * dx + dy * dy;
  };

  constexpr int kGrid = 64;
  constexpr double half_pi = std::numbers::pi / 2.0;
  int best = 0;
  double best_val = f(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    const double val = f(half_pi * k / kGrid);
    if (val < best_val) {
      best_val = val;
      best = k;
    }
  }
  double lo = half_pi * std::max(best - 1, 0) / kGrid;
  double hi = half_pi * std::min(best + 1, kGrid) / kGrid;

  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  double t = 0.5 * (lo + hi);
  double ft = f(t);

  // Newton on f'(t) = 0; each step is kept only if it improves f.
  for (int it = 0; it < 3; ++it) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double d1 = 2.0 * (a * s * (u - a * c) - b * c * (v - b * s));
    const double d2 = 2.0 * (a * c * (u - a * c) + a * a * s * s + b * s * (v - b * s) + b * b * c * c);
    if (!(d2 > 0.0)) break;
    const double cand = std::clamp(t - d1 / d2, 0.0, half_pi);
    const double fc = f(cand);
    if (!(fc < ft)) break;
    t = cand;
    ft = fc;
  }
  // The grid endpoints are exact candidates for points on the axes.
  return std::sqrt(std::min({ft, f(0.0), f(half_pi)}));
}

/// Exact Euclidean distance from `pos` to the shape's point set.
inline double distance_to_shape(const Vec2& pos, const ShapeSpec& shape) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Line>) {
          return std::abs(pos.x2 - s.m * pos.x1 - s.c) / std::sqrt(1.0 + s.m * s.m);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return ellipse_distance(pos, s.a, s.b);
        } else if constexpr (std::is_same_v<T, Circle>) {
          return std::abs(norm(pos) - s.r0);
        } else {
          const double ax = std::abs(pos.x1);
          const double ay = std::abs(pos.x2);
          if (ax <= s.a && ay <= s.a) return s.a - std::max(ax, ay);
          return std::hypot(std::max(ax - s.a, 0.0), std::max(ay - s.a, 0.0));
        }
      },
      shape);
}

}  // namespace swarmform
