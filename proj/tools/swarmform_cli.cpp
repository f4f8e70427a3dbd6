// Command-line driver for shape-formation and tracking runs.
//
// Exit codes: 0 success, 1 usage error, 2 configuration error, 3 diverged run,
// 4 I/O error.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swarmform/swarmform.hpp"

namespace fs = std::filesystem;
using namespace swarmform;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kDiverged = 3, kIo = 4 };

struct Paths {
  fs::path trajectory;
  fs::path metrics;
};

Paths output_paths(const Scenario& s, const std::optional<std::string>& out_dir) {
  if (out_dir) {
    fs::create_directories(*out_dir);
    return {fs::path(*out_dir) / "trajectory.csv", fs::path(*out_dir) / "metrics.csv"};
  }
  return {s.output.trajectory_path.empty() ? fs::path("trajectory.csv") : fs::path(s.output.trajectory_path),
          s.output.metrics_path.empty() ? fs::path("metrics.csv") : fs::path(s.output.metrics_path)};
}

int finish_run(const Scenario& s, const std::optional<std::string>& out_dir) {
  const auto rec = run_scenario(s);
  const auto paths = output_paths(s, out_dir);
  export_trajectory(rec, paths.trajectory, paths.metrics);

  const auto& m = rec.steps.back().metrics;
  std::cout << "shape            " << shape_name(s.formation.shape) << '\n'
            << "agents           " << s.init.count << '\n'
            << "seed             " << s.init.seed << '\n'
            << "terminal_reason  " << terminal_reason_name(rec.terminal_reason) << '\n'
            << "steps            " << rec.steps_taken << '\n'
            << "final_time       " << format_double(rec.final_state.time) << '\n'
            << "shape_error      " << format_double(m.shape_error) << '\n'
            << "spacing_cv       " << format_double(m.spacing_cv) << '\n'
            << "max_speed        " << format_double(m.max_speed) << '\n';
  if (m.tracking_error) std::cout << "tracking_error   " << format_double(*m.tracking_error) << '\n';
  if (m.centroid_offset) std::cout << "centroid_offset  " << format_double(*m.centroid_offset) << '\n';
  if (rec.coincidences > 0) std::cout << "coincidences     " << rec.coincidences << '\n';
  std::cout << "trajectory       " << paths.trajectory.string() << '\n'
            << "metrics          " << paths.metrics.string() << '\n';

  if (rec.terminal_reason == TerminalReason::Diverged) {
    std::cerr << "error: run diverged at t = " << format_double(rec.final_state.time) << '\n';
    return kDiverged;
  }
  return kOk;
}

void print_arm(std::ostream& os, const char* label, const ArmSummary& a) {
  os << std::left << std::setw(10) << label << std::right << std::setw(8) << format_double(a.r) << std::setw(6)
     << a.runs << std::setw(11) << a.converged << std::setw(14) << std::setprecision(6) << a.mean_cv
     << std::setw(14) << a.stddev_cv << std::setw(14) << a.min_cv << std::setw(14) << a.max_cv << std::setw(16)
     << a.mean_shape_error << '\n';
}

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swarm shape formation and moving-point tracking with foraging dynamics"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario and export its trajectory and metrics");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--seed", seed, "Override init.seed");
  run_cmd->add_option("--out", out_dir, "Output directory (trajectory.csv, metrics.csv)");

  std::string motion = "linear";
  std::size_t track_agents = 10;
  std::size_t track_steps = 200;
  double track_r0 = 2.0;
  std::optional<double> track_r;
  std::optional<std::uint64_t> track_seed;
  std::optional<std::string> track_out;
  auto* track_cmd = app.add_subcommand("track", "Encircle a moving point (linear or circular motion)");
  track_cmd->add_option("--motion", motion, "Center motion")->check(CLI::IsMember({"linear", "circular"}));
  track_cmd->add_option("--agents", track_agents, "Number of agents")->capture_default_str();
  track_cmd->add_option("--steps", track_steps, "Iterations")->capture_default_str();
  track_cmd->add_option("--r0", track_r0, "Circle radius around the center")->capture_default_str();
  track_cmd->add_option("--repulsion", track_r, "Repulsion magnitude r");
  track_cmd->add_option("--seed", track_seed, "Generator seed (default 0)");
  track_cmd->add_option("--out", track_out, "Output directory (trajectory.csv, metrics.csv)");

  std::string ablate_scenario;
  std::size_t ablate_seeds = 20;
  auto* ablate_cmd = app.add_subcommand("ablate", "Paired runs with and without nearest-neighbour repulsion");
  ablate_cmd->add_option("--scenario", ablate_scenario, "Scenario file")->required();
  ablate_cmd->add_option("--seeds", ablate_seeds, "Number of paired seeds")->capture_default_str();

  std::string sweep_scenario;
  std::string sweep_param;
  std::string sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over a list of values of one key");
  sweep_cmd->add_option("--scenario", sweep_scenario, "Scenario file")->required();
  sweep_cmd->add_option("--param", sweep_param, "Scenario key, e.g. dynamics.r or r")->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) {
      Scenario s = load_scenario(scenario_path);
      if (seed) s.init.seed = *seed;
      return finish_run(s, out_dir);
    }

    if (*track_cmd) {
      Scenario s = tracking_scenario(motion == "linear" ? Motion::Linear : Motion::Circular, track_seed.value_or(0));
      s.init.count = track_agents;
      s.integrator.max_steps = track_steps;
      s.integrator.convergence.window = track_steps + 1;
      s.formation.shape = Circle{track_r0};
      if (track_r) s.params.r = *track_r;
      return finish_run(s, track_out);
    }

    if (*ablate_cmd) {
      if (ablate_seeds == 0) throw ConfigError("--seeds must be >= 1");
      const Scenario s = load_scenario(ablate_scenario);
      const auto res = ablate(s, ablate_seeds);
      std::cout << "shape " << shape_name(s.formation.shape) << ", " << s.init.count << " agents, seeds "
                << s.init.seed << ".." << s.init.seed + ablate_seeds - 1 << "\n\n";
      std::cout << std::left << std::setw(10) << "arm" << std::right << std::setw(8) << "r" << std::setw(6) << "runs"
                << std::setw(11) << "converged" << std::setw(14) << "mean_cv" << std::setw(14) << "stddev_cv"
                << std::setw(14) << "min_cv" << std::setw(14) << "max_cv" << std::setw(16) << "mean_shape_err"
                << '\n';
      print_arm(std::cout, "off", res.without_repulsion);
      print_arm(std::cout, "on", res.with_repulsion);
      std::cout << "\npaired seeds with lower spacing_cv under repulsion: " << res.paired_wins << " / "
                << ablate_seeds << '\n';
      return kOk;
    }

    if (*sweep_cmd) {
      const Scenario s = load_scenario(sweep_scenario);
      const auto values = split_list(sweep_values);
      if (values.empty()) throw ConfigError("--values is empty");
      const auto rows = sweep(s, sweep_param, values);
      std::cout << "value,terminal_reason,steps,shape_error,max_shape_error,spacing_cv,max_speed\n";
      bool diverged = false;
      for (const auto& r : rows) {
        std::cout << r.value << ',' << terminal_reason_name(r.terminal_reason) << ',' << r.steps_taken << ','
                  << format_double(r.final_metrics.shape_error) << ','
                  << format_double(r.final_metrics.max_shape_error) << ','
                  << format_double(r.final_metrics.spacing_cv) << ',' << format_double(r.final_metrics.max_speed)
                  << '\n';
        diverged = diverged || r.terminal_reason == TerminalReason::Diverged;
      }
      return diverged ? kDiverged : kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kUsage;
}
