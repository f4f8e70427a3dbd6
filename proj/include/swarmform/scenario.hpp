#pragma once

// Scenario files.
//
// A scenario is a flat list of `key = value` lines. Blank lines and text after
// a '#' that starts a line or follows whitespace are ignored. Keys:
//
//   schema                      format version, must be 1 (default 1)
//   init.count                  number of agents (default 12)
//   init.lower, init.upper      bounds of the uniform start box (default -5, 5)
//   init.seed                   generator seed (default 0)
//   init.relative_to_center     shift the start box by C(0) (default false)
//   dynamics.k1 .k2 .sigma .beta .r     field gains (default 0.1 2 3.5 1.2 0.1)
//   shape.kind                  line | ellipse | circle | square (required)
//   shape.m, shape.c            line x2 = m*x1 + c (default 1, 0)
//   shape.a, shape.b            ellipse semi-axes (default 4, 2)
//   shape.r0                    circle radius (default 4)
//   shape.a                     square half side (default 5)
//   center.kind                 static | linear | circular (default static)
//   center.x1, center.x2        static position, or linear start (default origin / -10,-10)
//   center.v1, center.v2        linear velocity per iteration (default 0.1, 0.1)
//   center.radius, center.period        circular motion (default 6, 200)
//   integrator.dt               step length in iterations (default 1)
//   integrator.scheme           euler | rk4 (default euler)
//   integrator.max_steps        (default 2000)
//   integrator.vel_tol .shape_tol .window   convergence rule (default 1e-3, 0.05, 10)
//   output.trajectory_path      (default empty: chosen by the caller)
//   output.metrics_path         (default empty)
//   output.snapshot_stride      (default 1 for max_steps <= 500, else 10)
//
// Unknown keys, duplicate keys and keys that do not apply to the selected
// shape or center kind are rejected.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmform/core.hpp"
#include "swarmform/integrator.hpp"
#include "swarmform/shapes.hpp"
#include "swarmform/text.hpp"
#include "swarmform/tracking.hpp"

namespace swarmform {

inline constexpr int kScenarioSchema = 1;

/// Syntax or value error tied to a line of a scenario file.
class ParseError : public ConfigError {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : ConfigError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputSpec {
  std::string trajectory_path;
  std::string metrics_path;
  std::size_t snapshot_stride = 1;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct Scenario {
  InitSpec init;
  bool init_relative_to_center = false;
  DynamicsParams params;
  Formation formation;
  IntegratorConfig integrator;
  OutputSpec output;

  void validate() const {
    init.validate();
    params.validate();
    formation.validate();
    integrator.validate();
    if (output.snapshot_stride == 0) throw ConfigError("snapshot_stride must be >= 1");
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline std::size_t default_snapshot_stride(std::size_t max_steps) { return max_steps <= 500 ? 1 : 10; }

namespace detail {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class KeyReader {
 public:
  explicit KeyReader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  std::optional<Entry> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    Entry e = std::move(it->second);
    entries_.erase(it);
    return e;
  }

  double number(const std::string& key, double fallback) {
    const auto e = take(key);
    if (!e) return fallback;
    const auto v = parse_double(e->value);
    if (!v) throw ParseError(e->line, key + ": expected a number, got '" + e->value + "'");
    return *v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    const auto e = take(key);
    if (!e) return fallback;
    const auto v = parse_uint(e->value);
    if (!v) throw ParseError(e->line, key + ": expected a non-negative integer, got '" + e->value + "'");
    return *v;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto e = take(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError(e->line, key + ": expected true or false, got '" + e->value + "'");
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto e = take(key);
    return e ? e->value : fallback;
  }

  // Rejects whatever was not consumed.
  void finish(std::string_view shape_kind, std::string_view center_kind) const {
    if (entries_.empty()) return;
    const auto& [key, e] = *entries_.begin();
    if (key.starts_with("shape."))
      throw ParseError(e.line, "key '" + key + "' does not apply to shape.kind = " + std::string(shape_kind));
    if (key.starts_with("center."))
      throw ParseError(e.line, "key '" + key + "' does not apply to center.kind = " + std::string(center_kind));
    throw ParseError(e.line, "unknown key '" + key + "'");
  }

 private:
  std::map<std::string, Entry> entries_;
};

inline std::map<std::string, Entry> split_entries(std::string_view text) {
  std::map<std::string, Entry> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    for (std::size_t h = line.find('#'); h != std::string_view::npos; h = line.find('#', h + 1)) {
      if (h == 0 || line[h - 1] == ' ' || line[h - 1] == '\t') {
        line = line.substr(0, h);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (value.empty()) throw ParseError(line_no, key + ": missing value");
    if (out.contains(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    out.emplace(key, Entry{value, line_no});
  }
  return out;
}

}  // namespace detail

/// Parses and validates a scenario document.
inline Scenario parse_scenario(std::string_view text) {
  detail::KeyReader in(detail::split_entries(text));
  Scenario s;

  if (const auto e = in.take("schema")) {
    if (e->value != std::to_string(kScenarioSchema))
      throw ParseError(e->line, "unsupported schema '" + e->value + "', expected " + std::to_string(kScenarioSchema));
  }

  s.init.count = static_cast<std::size_t>(in.integer("init.count", s.init.count));
  s.init.lower = in.number("init.lower", s.init.lower);
  s.init.upper = in.number("init.upper", s.init.upper);
  s.init.seed = in.integer("init.seed", s.init.seed);
  s.init_relative_to_center = in.boolean("init.relative_to_center", false);

  s.params.k1 = in.number("dynamics.k1", s.params.k1);
  s.params.k2 = in.number("dynamics.k2", s.params.k2);
  s.params.sigma = in.number("dynamics.sigma", s.params.sigma);
  s.params.beta = in.number("dynamics.beta", s.params.beta);
  s.params.r = in.number("dynamics.r", s.params.r);

  const auto kind = in.take("shape.kind");
  if (!kind) throw ConfigError("missing required key 'shape.kind'");
  if (kind->value == "line") {
    Line l;
    l.m = in.number("shape.m", l.m);
    l.c = in.number("shape.c", l.c);
    s.formation.shape = l;
  } else if (kind->value == "ellipse") {
    Ellipse e;
    e.a = in.number("shape.a", e.a);
    e.b = in.number("shape.b", e.b);
    s.formation.shape = e;
  } else if (kind->value == "circle") {
    Circle c;
    c.r0 = in.number("shape.r0", c.r0);
    s.formation.shape = c;
  } else if (kind->value == "square") {
    Square q;
    q.a = in.number("shape.a", q.a);
    s.formation.shape = q;
  } else {
    throw ParseError(kind->line, "shape.kind: expected line, ellipse, circle or square, got '" + kind->value + "'");
  }

  const auto center = in.take("center.kind");
  const std::string center_kind = center ? center->value : "static";
  if (center_kind == "static") {
    StaticCenter c;
    c.c.x1 = in.number("center.x1", 0.0);
    c.c.x2 = in.number("center.x2", 0.0);
    s.formation.center = c;
  } else if (center_kind == "linear") {
    LinearCenter c;
    c.c0.x1 = in.number("center.x1", c.c0.x1);
    c.c0.x2 = in.number("center.x2", c.c0.x2);
    c.v.x1 = in.number("center.v1", c.v.x1);
    c.v.x2 = in.number("center.v2", c.v.x2);
    s.formation.center = c;
  } else if (center_kind == "circular") {
    CircularCenter c;
    c.radius = in.number("center.radius", c.radius);
    const auto period = in.integer("center.period", static_cast<std::uint64_t>(c.period));
    if (period > 1'000'000'000) throw ConfigError("circular center period is too large");
    c.period = static_cast<int>(period);
    s.formation.center = c;
  } else {
    throw ParseError(center->line, "center.kind: expected static, linear or circular, got '" + center_kind + "'");
  }

  s.integrator.dt = in.number("integrator.dt", s.integrator.dt);
  if (const auto e = in.take("integrator.scheme")) {
    if (e->value == "euler") {
      s.integrator.scheme = Scheme::Euler;
    } else if (e->value == "rk4") {
      s.integrator.scheme = Scheme::Rk4;
    } else {
      throw ParseError(e->line, "integrator.scheme: expected euler or rk4, got '" + e->value + "'");
    }
  }
  s.integrator.max_steps = static_cast<std::size_t>(in.integer("integrator.max_steps", s.integrator.max_steps));
  s.integrator.convergence.vel_tol = in.number("integrator.vel_tol", s.integrator.convergence.vel_tol);
  s.integrator.convergence.shape_tol = in.number("integrator.shape_tol", s.integrator.convergence.shape_tol);
  s.integrator.convergence.window =
      static_cast<std::size_t>(in.integer("integrator.window", s.integrator.convergence.window));

  s.output.trajectory_path = in.text("output.trajectory_path", "");
  s.output.metrics_path = in.text("output.metrics_path", "");
  s.output.snapshot_stride = static_cast<std::size_t>(
      in.integer("output.snapshot_stride", default_snapshot_stride(s.integrator.max_steps)));

  in.finish(shape_name(s.formation.shape), center_kind);
  s.validate();
  return s;
}

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
inline std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  auto num = [&](std::string_view key, double v) { os << key << " = " << format_double(v) << '\n'; };
  auto uint = [&](std::string_view key, std::uint64_t v) { os << key << " = " << v << '\n'; };

  os << "schema = " << kScenarioSchema << '\n';
  uint("init.count", s.init.count);
  num("init.lower", s.init.lower);
  num("init.upper", s.init.upper);
  uint("init.seed", s.init.seed);
  os << "init.relative_to_center = " << (s.init_relative_to_center ? "true" : "false") << '\n';
  num("dynamics.k1", s.params.k1);
  num("dynamics.k2", s.params.k2);
  num("dynamics.sigma", s.params.sigma);
  num("dynamics.beta", s.params.beta);
  num("dynamics.r", s.params.r);

  os << "shape.kind = " << shape_name(s.formation.shape) << '\n';
  if (const auto* l = std::get_if<Line>(&s.formation.shape)) {
    num("shape.m", l->m);
    num("shape.c", l->c);
  } else if (const auto* e = std::get_if<Ellipse>(&s.formation.shape)) {
    num("shape.a", e->a);
    num("shape.b", e->b);
  } else if (const auto* c = std::get_if<Circle>(&s.formation.shape)) {
    num("shape.r0", c->r0);
  } else if (const auto* q = std::get_if<Square>(&s.formation.shape)) {
    num("shape.a", q->a);
  }

  os << "center.kind = " << center_name(s.formation.center) << '\n';
  if (const auto* c = std::get_if<StaticCenter>(&s.formation.center)) {
    num("center.x1", c->c.x1);
    num("center.x2", c->c.x2);
  } else if (const auto* l = std::get_if<LinearCenter>(&s.formation.center)) {
    num("center.x1", l->c0.x1);
    num("center.x2", l->c0.x2);
    num("center.v1", l->v.x1);
    num("center.v2", l->v.x2);
  } else if (const auto* r = std::get_if<CircularCenter>(&s.formation.center)) {
    num("center.radius", r->radius);
    uint("center.period", static_cast<std::uint64_t>(r->period));
  }

  num("integrator.dt", s.integrator.dt);
  os << "integrator.scheme = " << scheme_name(s.integrator.scheme) << '\n';
  uint("integrator.max_steps", s.integrator.max_steps);
  num("integrator.vel_tol", s.integrator.convergence.vel_tol);
  num("integrator.shape_tol", s.integrator.convergence.shape_tol);
  uint("integrator.window", s.integrator.convergence.window);

  if (!s.output.trajectory_path.empty()) os << "output.trajectory_path = " << s.output.trajectory_path << '\n';
  if (!s.output.metrics_path.empty()) os << "output.metrics_path = " << s.output.metrics_path << '\n';
  uint("output.snapshot_stride", s.output.snapshot_stride);
  return os.str();
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

/// Starting swarm of the scenario.
inline SwarmState initial_state(const Scenario& s) {
  const Vec2 offset = s.init_relative_to_center ? s.formation.center_at(0.0) : Vec2{};
  return init_swarm(s.init, offset);
}

inline TrajectoryRecord run_scenario(const Scenario& s) {
  s.validate();
  return run(initial_state(s), s.params, s.formation, s.integrator, s.output.snapshot_stride);
}

/// Replaces one key of the scenario and re-validates. `key` is a full scenario
/// key ("dynamics.r") or an unambiguous last component ("r").
inline Scenario with_override(const Scenario& s, std::string_view key, std::string_view value) {
  std::string text = serialize_scenario(s);
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) lines.push_back(line);

  auto key_of = [](const std::string& line) { return std::string(trim(std::string_view(line).substr(0, line.find('=')))); };

  std::string full;
  for (const auto& line : lines) {
    const auto k = key_of(line);
    if (k == key) full = k;
  }
  if (full.empty() && key.find('.') == std::string_view::npos) {
    for (const auto& line : lines) {
      const auto k = key_of(line);
      if (k.ends_with("." + std::string(key))) {
        if (!full.empty()) throw ConfigError("parameter '" + std::string(key) + "' is ambiguous");
        full = k;
      }
    }
  }
  if (full.empty()) {
    // Keys that are only written when set (output paths) may still be overridden.
    if (key != "output.trajectory_path" && key != "output.metrics_path")
      throw ConfigError("unknown parameter '" + std::string(key) + "'");
    full = std::string(key);
    lines.push_back(full + " = " + std::string(value));
  } else {
    for (auto& line : lines) {
      if (key_of(line) == full) line = full + " = " + std::string(value);
    }
  }
  std::string out;
  for (const auto& line : lines) out += line + '\n';
  return parse_scenario(out);
}

}  // namespace swarmform
