#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's geometry or dynamics code paths.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "swarmform/vec2.hpp"

namespace oracle {

using swarmform::Vec2;

/// Orthogonal projection onto x2 = m*x1 + c via the unit direction of the line.
inline Vec2 project_on_line(const Vec2& p, double m, double c) {
  const double len = std::sqrt(1.0 + m * m);
  const Vec2 dir{1.0 / len, m / len};
  const Vec2 origin{0.0, c};
  const double s = (p.x1 - origin.x1) * dir.x1 + (p.x2 - origin.x2) * dir.x2;
  return {origin.x1 + s * dir.x1, origin.x2 + s * dir.x2};
}

inline Vec2 radial_projection(const Vec2& p, double r0) {
  const double len = std::sqrt(p.x1 * p.x1 + p.x2 * p.x2);
  return {r0 * p.x1 / len, r0 * p.x2 / len};
}

/// Distance to the ellipse by dense sampling of `samples` boundary points.
inline double ellipse_distance_sampled(const Vec2& p, double a, double b, int samples = 100000) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    const double dx = p.x1 - a * std::cos(t);
    const double dy = p.x2 - b * std::sin(t);
    best = std::min(best, dx * dx + dy * dy);
  }
  return std::sqrt(best);
}

/// Exhaustive scan over all pairs; lowest index wins ties.
inline std::size_t nearest_brute(const std::vector<Vec2>& pts, std::size_t i) {
  std::size_t best = i;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == i) continue;
    const double dx = pts[j].x1 - pts[i].x1;
    const double dy = pts[j].x2 - pts[i].x2;
    const double d = dx * dx + dy * dy;
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

}  // namespace oracle

namespace gen {

using swarmform::Vec2;

/// Deterministic source of random test inputs.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Vec2 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

  std::vector<Vec2> points(std::size_t n, double lo, double hi) {
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(point(lo, hi));
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
