#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "swarmform/integrator.hpp"
#include "swarmform/scenario.hpp"
#include "swarmform/text.hpp"

namespace swarmform {

inline constexpr std::string_view kTrajectoryHeader = "time,agent_id,x1,x2";
inline constexpr std::string_view kMetricsHeader = "time,shape_error,max_shape_error,spacing_cv,max_speed";
inline constexpr std::string_view kTrackingColumns = ",tracking_error,centroid_offset";

/// One row per (snapshot, agent).
inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << kTrajectoryHeader << '\n';
  for (const auto& snap : rec.steps) {
    const std::string t = format_double(snap.time);
    for (std::size_t i = 0; i < snap.positions.size(); ++i) {
      os << t << ',' << i << ',' << format_double(snap.positions[i].x1) << ','
         << format_double(snap.positions[i].x2) << '\n';
    }
  }
}

/// One row per snapshot. Tracking runs carry two extra columns.
inline void write_metrics_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << kMetricsHeader;
  if (rec.tracking) os << kTrackingColumns;
  os << '\n';
  for (const auto& snap : rec.steps) {
    const auto& m = snap.metrics;
    os << format_double(snap.time) << ',' << format_double(m.shape_error) << ',' << format_double(m.max_shape_error)
       << ',' << format_double(m.spacing_cv) << ',' << format_double(m.max_speed);
    if (rec.tracking) {
      os << ',' << format_double(m.tracking_error.value_or(0.0)) << ','
         << format_double(m.centroid_offset.value_or(0.0));
    }
    os << '\n';
  }
}

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
  }
}

inline void export_trajectory(const TrajectoryRecord& rec, const std::filesystem::path& trajectory_path,
                              const std::filesystem::path& metrics_path) {
  if (rec.steps.empty()) throw ConfigError("cannot export an empty trajectory");
  std::ostringstream traj;
  write_trajectory_csv(traj, rec);
  std::ostringstream metrics;
  write_metrics_csv(metrics, rec);
  write_file_atomic(trajectory_path, traj.str());
  write_file_atomic(metrics_path, metrics.str());
}

}  // namespace swarmform
