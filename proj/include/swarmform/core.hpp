#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmform/vec2.hpp"

namespace swarmform {

/// Raised for any invalid parameter, bound or scenario value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AgentState {
  std::size_t id = 0;
  Vec2 position;
  // Last known unit direction of the agent relative to the formation center.
  // Used only when the agent sits exactly on the center, where the polar
  // angle of its position is undefined.
  Vec2 heading{1.0, 0.0};

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct SwarmState {
  std::vector<AgentState> agents;
  double time = 0.0;

  std::size_t size() const { return agents.size(); }

  std::vector<Vec2> positions() const {
    std::vector<Vec2> out;
    out.reserve(agents.size());
    for (const auto& a : agents) out.push_back(a.position);
    return out;
  }

  friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

/// Gains of the shape-formation field. Defaults are the stable-region values
/// used for every reported experiment.
struct DynamicsParams {
  double k1 = 0.1;     // inter-agent attraction gain
  double k2 = 2.0;     // target attraction gain
  double sigma = 3.5;  // profile width
  double beta = 1.2;   // profile exponent
  double r = 0.1;      // nearest-neighbour repulsion magnitude; 0 disables it

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
    };
    positive(k1, "k1");
    positive(k2, "k2");
    positive(sigma, "sigma");
    positive(beta, "beta");
    if (!(std::isfinite(r) && r >= 0.0)) throw ConfigError("r must be >= 0");
  }

  friend bool operator==(const DynamicsParams&, const DynamicsParams&) = default;
};

struct InitSpec {
  std::size_t count = 12;
  double lower = -5.0;
  double upper = 5.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (count == 0) throw ConfigError("count must be >= 1");
    if (!(std::isfinite(lower) && std::isfinite(upper)))
      throw ConfigError("lower and upper must be finite");
    if (!(lower < upper)) throw ConfigError("lower must be < upper");
  }

  friend bool operator==(const InitSpec&, const InitSpec&) = default;
};

/// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw. Written
/// out explicitly because std::uniform_real_distribution is not specified
/// bit-for-bit across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Initial heading of agent `id` out of `count`: the unit vector at angle
/// 2*pi*id/count.
inline Vec2 default_heading(std::size_t id, std::size_t count) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(id) / static_cast<double>(count);
  return {std::cos(angle), std::sin(angle)};
}

/// Places `spec.count` agents uniformly at random in [lower, upper]^2, shifted
/// by `offset`.
///
/// Coordinates are drawn from std::mt19937_64 (whose output sequence is fixed
/// by the standard) seeded with `spec.seed`, in the order x1 then x2 for agent
/// 0, 1, ... . The same spec always yields a bit-identical state.
inline SwarmState init_swarm(const InitSpec& spec, Vec2 offset = {}) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const double width = spec.upper - spec.lower;
  SwarmState state;
  state.agents.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double u1 = unit_uniform(rng);
    const double u2 = unit_uniform(rng);
    AgentState agent;
    agent.id = i;
    agent.position = Vec2{spec.lower + u1 * width, spec.lower + u2 * width} + offset;
    agent.heading = default_heading(i, spec.count);
    state.agents.push_back(agent);
  }
  return state;
}

/// Builds a state from explicit positions, with ids 0..M-1 and default headings.
inline SwarmState make_swarm(const std::vector<Vec2>& positions, double time = 0.0) {
  SwarmState state;
  state.time = time;
  state.agents.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    state.agents.push_back({i, positions[i], default_heading(i, positions.size())});
  }
  return state;
}

}  // namespace swarmform
