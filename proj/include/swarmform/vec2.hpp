#pragma once

#include <cmath>
#include <ostream>

namespace swarmform {

/// Point or displacement in the plane.
struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x1 *= s;
    x2 *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x1, -a.x2}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator/(const Vec2& a, double s) { return {a.x1 / s, a.x2 / s}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Vec2& v) {
    return os << '(' << v.x1 << ", " << v.x2 << ')';
  }
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x1 * b.x1 + a.x2 * b.x2; }

/// z-component of the 3D cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x1 * b.x2 - a.x2 * b.x1; }

constexpr double norm_squared(const Vec2& v) { return dot(v, v); }

inline double norm(const Vec2& v) { return std::hypot(v.x1, v.x2); }

inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

inline bool is_finite(const Vec2& v) { return std::isfinite(v.x1) && std::isfinite(v.x2); }

constexpr bool is_zero(const Vec2& v) { return v.x1 == 0.0 && v.x2 == 0.0; }

/// Counter-clockwise rotation by `angle` radians.
inline Vec2 rotated(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x1 - s * v.x2, s * v.x1 + c * v.x2};
}

}  // namespace swarmform
