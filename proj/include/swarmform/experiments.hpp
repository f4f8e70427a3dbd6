#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <string>
#include <string_view>
#include <vector>

#include "swarmform/integrator.hpp"
#include "swarmform/scenario.hpp"

namespace swarmform {

// Reference set-ups. Every one uses the default (stable-region) gains.

inline Scenario shape_scenario(const ShapeSpec& shape, std::uint64_t seed, std::size_t agents = 12) {
  Scenario s;
  s.init.count = agents;
  s.init.seed = seed;
  s.formation.shape = shape;
  s.integrator.max_steps = 2000;
  s.output.snapshot_stride = default_snapshot_stride(s.integrator.max_steps);
  return s;
}

inline Scenario line_scenario(std::uint64_t seed) { return shape_scenario(Line{-1.0, 5.0}, seed); }
inline Scenario ellipse_scenario(std::uint64_t seed) { return shape_scenario(Ellipse{4.0, 2.0}, seed); }
inline Scenario circle_scenario(std::uint64_t seed) { return shape_scenario(Circle{4.0}, seed); }
inline Scenario square_scenario(std::uint64_t seed) { return shape_scenario(Square{5.0}, seed); }

enum class Motion { Linear, Circular };

/// Ten agents encircling (r0 = 2) a point that either moves from (-10, -10)
/// with velocity (0.1, 0.1) or turns on the radius-6 circle once per 200
/// iterations. The start box is [-5, 5]^2 around C(0); runs last 200 steps
/// with no early stop.
inline Scenario tracking_scenario(Motion motion, std::uint64_t seed) {
  Scenario s;
  s.init.count = 10;
  s.init.seed = seed;
  s.init_relative_to_center = true;
  s.formation.shape = Circle{2.0};
  if (motion == Motion::Linear) {
    s.formation.center = LinearCenter{{-10.0, -10.0}, {0.1, 0.1}};
  } else {
    s.formation.center = CircularCenter{6.0, 200};
  }
  s.integrator.max_steps = 200;
  s.integrator.convergence.vel_tol = 0.0;
  s.integrator.convergence.shape_tol = 0.0;
  s.integrator.convergence.window = 200 + 1;
  s.output.snapshot_stride = 1;
  return s;
}

namespace detail {

template <class Fn>
auto parallel_map(std::size_t n, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::future<R>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, fn, i));
  std::vector<R> out;
  out.reserve(n);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace detail

struct ArmSummary {
  double r = 0.0;
  std::size_t runs = 0;
  std::size_t converged = 0;
  std::vector<double> spacing_cv;   // final value per seed
  std::vector<double> shape_error;  // final value per seed
  double mean_cv = 0.0;
  double stddev_cv = 0.0;
  double min_cv = 0.0;
  double max_cv = 0.0;
  double mean_shape_error = 0.0;
  double max_shape_error = 0.0;
};

struct AblationResult {
  ArmSummary without_repulsion;  // r = 0
  ArmSummary with_repulsion;
  std::size_t paired_wins = 0;  // seeds where repulsion gave the lower spacing_cv
};

namespace detail {

inline ArmSummary summarize(double r, const std::vector<TrajectoryRecord>& runs) {
  ArmSummary a;
  a.r = r;
  a.runs = runs.size();
  for (const auto& rec : runs) {
    const auto& m = rec.steps.back().metrics;
    a.spacing_cv.push_back(m.spacing_cv);
    a.shape_error.push_back(m.shape_error);
    if (rec.terminal_reason == TerminalReason::Converged) ++a.converged;
  }
  if (runs.empty()) return a;
  const double n = static_cast<double>(runs.size());
  for (double v : a.spacing_cv) a.mean_cv += v / n;
  for (double v : a.spacing_cv) a.stddev_cv += (v - a.mean_cv) * (v - a.mean_cv) / n;
  a.stddev_cv = std::sqrt(a.stddev_cv);
  a.min_cv = *std::min_element(a.spacing_cv.begin(), a.spacing_cv.end());
  a.max_cv = *std::max_element(a.spacing_cv.begin(), a.spacing_cv.end());
  for (double v : a.shape_error) a.mean_shape_error += v / n;
  a.max_shape_error = *std::max_element(a.shape_error.begin(), a.shape_error.end());
  return a;
}

}  // namespace detail

/// Paired repulsion ablation: for seeds base.init.seed, +1, ..., +seeds-1 the
/// scenario is run once with r = 0 and once with r = base.params.r (or the
/// default 0.1 when the base already has r = 0).
inline AblationResult ablate(const Scenario& base, std::size_t seeds) {
  base.validate();
  const double r_on = base.params.r > 0.0 ? base.params.r : DynamicsParams{}.r;
  auto arm = [&](double r) {
    return detail::parallel_map(seeds, [&base, r](std::size_t i) {
      Scenario s = base;
      s.init.seed = base.init.seed + i;
      s.params.r = r;
      return run_scenario(s);
    });
  };
  const auto off = arm(0.0);
  const auto on = arm(r_on);
  AblationResult res{detail::summarize(0.0, off), detail::summarize(r_on, on), 0};
  for (std::size_t i = 0; i < seeds; ++i) {
    if (res.with_repulsion.spacing_cv[i] < res.without_repulsion.spacing_cv[i]) ++res.paired_wins;
  }
  return res;
}

struct SweepRow {
  std::string value;
  TerminalReason terminal_reason = TerminalReason::MaxSteps;
  std::size_t steps_taken = 0;
  StepMetrics final_metrics;
};

/// Runs the scenario once per value of `param` (see with_override).
inline std::vector<SweepRow> sweep(const Scenario& base, std::string_view param,
                                   const std::vector<std::string>& values) {
  std::vector<Scenario> scenarios;
  scenarios.reserve(values.size());
  for (const auto& v : values) scenarios.push_back(with_override(base, param, v));
  return detail::parallel_map(values.size(), [&](std::size_t i) {
    const auto rec = run_scenario(scenarios[i]);
    return SweepRow{values[i], rec.terminal_reason, rec.steps_taken, rec.steps.back().metrics};
  });
}

}  // namespace swarmform
