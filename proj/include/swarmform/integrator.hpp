#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "swarmform/core.hpp"
#include "swarmform/dynamics.hpp"
#include "swarmform/metrics.hpp"
#include "swarmform/tracking.hpp"

namespace swarmform {

enum class Scheme { Euler, Rk4 };

inline std::string_view scheme_name(Scheme s) { return s == Scheme::Euler ? "euler" : "rk4"; }

/// Stopping rule. A state qualifies when max speed <= vel_tol and mean shape
/// error <= shape_tol (both inclusive); the run has converged once `window`
/// consecutive states qualify.
struct ConvergenceCriteria {
  double vel_tol = 1e-3;
  double shape_tol = 0.05;
  std::size_t window = 10;

  friend bool operator==(const ConvergenceCriteria&, const ConvergenceCriteria&) = default;
};

struct IntegratorConfig {
  double dt = 1.0;  // one step is one iteration
  Scheme scheme = Scheme::Euler;
  std::size_t max_steps = 2000;
  ConvergenceCriteria convergence;

  void validate() const {
    if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("dt must be > 0");
    if (max_steps == 0) throw ConfigError("max_steps must be >= 1");
    if (!(convergence.vel_tol >= 0.0)) throw ConfigError("vel_tol must be >= 0");
    if (!(convergence.shape_tol >= 0.0)) throw ConfigError("shape_tol must be >= 0");
    if (convergence.window == 0) throw ConfigError("window must be >= 1");
  }

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

enum class TerminalReason { Converged, MaxSteps, Diverged };

inline std::string_view terminal_reason_name(TerminalReason r) {
  switch (r) {
    case TerminalReason::Converged: return "converged";
    case TerminalReason::MaxSteps: return "max_steps";
    case TerminalReason::Diverged: return "diverged";
  }
  return "unknown";
}

struct Snapshot {
  double time = 0.0;
  std::vector<Vec2> positions;
  StepMetrics metrics;
};

struct TrajectoryRecord {
  std::vector<Snapshot> steps;
  TerminalReason terminal_reason = TerminalReason::MaxSteps;
  std::size_t steps_taken = 0;
  std::size_t coincidences = 0;  // repulsion terms dropped for coincident agents
  bool tracking = false;         // metrics carry tracking_error / centroid_offset
  SwarmState final_state;
};

struct StepResult {
  SwarmState state;
  std::size_t coincidences = 0;
  bool diverged = false;
};

inline bool within_tolerance(const StepMetrics& m, const ConvergenceCriteria& c) {
  return m.max_speed <= c.vel_tol && m.shape_error <= c.shape_tol;
}

/// True when the last `window` entries of `history` all qualify.
inline bool converged(std::span<const StepMetrics> history, const ConvergenceCriteria& c) {
  if (history.size() < c.window) return false;
  for (std::size_t k = history.size() - c.window; k < history.size(); ++k) {
    if (!within_tolerance(history[k], c)) return false;
  }
  return true;
}

/// Counts consecutive qualifying states without keeping the history.
class ConvergenceMonitor {
 public:
  explicit ConvergenceMonitor(ConvergenceCriteria criteria) : criteria_(criteria) {}

  bool update(const StepMetrics& m) {
    streak_ = within_tolerance(m, criteria_) ? streak_ + 1 : 0;
    return converged();
  }
  bool converged() const { return streak_ >= criteria_.window; }

 private:
  ConvergenceCriteria criteria_;
  std::size_t streak_ = 0;
};

namespace detail {

inline auto target_fn(const Formation& formation, double t) {
  const Vec2 c = formation.center_at(t);
  return [&formation, c](const Vec2& pos, const Vec2& heading) {
    return shape_target(pos - c, formation.shape, heading) + c;
  };
}

inline VelocityField field_at(std::span<const Vec2> positions, std::span<const Vec2> headings,
                              const DynamicsParams& params, const Formation& formation, double t) {
  return compute_velocities(positions, headings, params, target_fn(formation, t));
}

inline bool all_finite(std::span<const Vec2> vs) {
  for (const auto& v : vs) {
    if (!is_finite(v)) return false;
  }
  return true;
}

inline std::vector<Vec2> axpy(std::span<const Vec2> x, double a, std::span<const Vec2> y) {
  std::vector<Vec2> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
  return out;
}

// Advances `state` to time `t_next` given the field already evaluated at the
// current state.
inline StepResult advance(const SwarmState& state, const VelocityField& current, const DynamicsParams& params,
                          const Formation& formation, const IntegratorConfig& cfg, double t_next) {
  const auto x = state.positions();
  const auto head = headings_of(state);
  const double t = state.time;
  const double dt = t_next - t;

  StepResult out;
  out.coincidences = current.coincidences;
  std::vector<Vec2> next;
  if (cfg.scheme == Scheme::Euler) {
    next = axpy(x, dt, current.velocities);
  } else {
    const auto& k1 = current.velocities;
    const auto s2 = axpy(x, 0.5 * dt, k1);
    const auto f2 = field_at(s2, head, params, formation, t + 0.5 * dt);
    const auto s3 = axpy(x, 0.5 * dt, f2.velocities);
    const auto f3 = field_at(s3, head, params, formation, t + 0.5 * dt);
    const auto s4 = axpy(x, dt, f3.velocities);
    const auto f4 = field_at(s4, head, params, formation, t_next);
    out.coincidences += f2.coincidences + f3.coincidences + f4.coincidences;
    if (!all_finite(f2.velocities) || !all_finite(f3.velocities) || !all_finite(f4.velocities)) {
      out.diverged = true;
      out.state = state;
      return out;
    }
    next = x;
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] += (dt / 6.0) * (k1[i] + 2.0 * f2.velocities[i] + 2.0 * f3.velocities[i] + f4.velocities[i]);
    }
  }
  if (!all_finite(next)) {
    out.diverged = true;
    out.state = state;
    return out;
  }

  out.state = state;
  out.state.time = t_next;
  const Vec2 c_next = formation.center_at(t_next);
  for (std::size_t i = 0; i < next.size(); ++i) {
    auto& agent = out.state.agents[i];
    agent.position = next[i];
    const Vec2 rel = next[i] - c_next;
    if (!is_zero(rel)) agent.heading = rel / norm(rel);
  }
  return out;
}

}  // namespace detail

/// Velocity field of the formation dynamics at `state`.
inline VelocityField formation_velocities(const SwarmState& state, const DynamicsParams& params,
                                          const Formation& formation) {
  const auto x = state.positions();
  const auto head = detail::headings_of(state);
  return detail::field_at(x, head, params, formation, state.time);
}

/// One synchronous step of length cfg.dt. The input state is not modified.
/// A non-finite velocity or position sets `diverged` and returns the input.
inline StepResult step(const SwarmState& state, const DynamicsParams& params, const Formation& formation,
                       const IntegratorConfig& cfg) {
  const auto current = formation_velocities(state, params, formation);
  if (!detail::all_finite(current.velocities)) return {state, current.coincidences, true};
  return detail::advance(state, current, params, formation, cfg, state.time + cfg.dt);
}

inline StepMetrics state_metrics(const SwarmState& state, const VelocityField& field, const Formation& formation) {
  const auto x = state.positions();
  return compute_step_metrics(x, field.velocities, formation, state.time);
}

/// Integrates from `init` until convergence, `max_steps` or divergence.
///
/// Every `stride`-th state is stored, together with the initial and the final
/// one. Time after k steps is init.time + k*dt exactly. Convergence is checked
/// on every state, including the initial one.
inline TrajectoryRecord run(const SwarmState& init, const DynamicsParams& params, const Formation& formation,
                            const IntegratorConfig& cfg, std::size_t stride = 1) {
  params.validate();
  formation.validate();
  cfg.validate();
  if (init.agents.empty()) throw ConfigError("swarm must contain at least one agent");
  if (stride == 0) throw ConfigError("snapshot_stride must be >= 1");

  TrajectoryRecord rec;
  rec.tracking = formation.tracking();
  ConvergenceMonitor monitor(cfg.convergence);

  SwarmState state = init;
  VelocityField field = formation_velocities(state, params, formation);
  if (!detail::all_finite(field.velocities)) {
    rec.terminal_reason = TerminalReason::Diverged;
    rec.final_state = state;
    return rec;
  }
  StepMetrics metrics = state_metrics(state, field, formation);
  rec.steps.push_back({state.time, state.positions(), metrics});
  bool done = monitor.update(metrics);

  std::size_t k = 0;
  bool diverged = false;
  while (!done && k < cfg.max_steps) {
    const double t_next = init.time + static_cast<double>(k + 1) * cfg.dt;
    StepResult res = detail::advance(state, field, params, formation, cfg, t_next);
    rec.coincidences += res.coincidences;
    if (res.diverged) {
      diverged = true;
      break;
    }
    VelocityField next_field = formation_velocities(res.state, params, formation);
    if (!detail::all_finite(next_field.velocities)) {
      diverged = true;
      break;
    }
    ++k;
    state = std::move(res.state);
    field = std::move(next_field);
    metrics = state_metrics(state, field, formation);
    done = monitor.update(metrics);
    if (k % stride == 0 || done || k == cfg.max_steps) {
      rec.steps.push_back({state.time, state.positions(), metrics});
    }
  }

  if (diverged) {
    rec.terminal_reason = TerminalReason::Diverged;
    if (rec.steps.back().time != state.time) rec.steps.push_back({state.time, state.positions(), metrics});
  } else {
    rec.terminal_reason = done ? TerminalReason::Converged : TerminalReason::MaxSteps;
  }
  rec.steps_taken = k;
  rec.final_state = std::move(state);
  return rec;
}

}  // namespace swarmform
