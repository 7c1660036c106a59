#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "firenav/sim.hpp"

namespace firenav {

// Thrown when an output directory lacks the data a plot needs.
struct MissingDataError : std::runtime_error {
  explicit MissingDataError(const std::string& what) : std::runtime_error(what) {}
};

// Shortest decimal form with 9 significant digits, so rewriting a parsed
// value reproduces the file byte for byte.
std::string format_float(double v);

// ---------------------------------------------------------------------------
// Trajectory CSV: header `t,agent,x,y,z,heading,mode,v,u,min_clearance`, one
// row per control step, all floats printed with format_float.
// ---------------------------------------------------------------------------

void write_trajectory_csv(const std::string& path, int agent_id,
                          const std::vector<TrajectorySample>& samples);

struct TrajectoryFile {
  int agent_id = 0;
  std::vector<TrajectorySample> samples;
};

TrajectoryFile read_trajectory_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Run artifacts
// ---------------------------------------------------------------------------

void write_metrics(const std::string& path, const SimResult& result);

// Everything a later plot invocation needs besides the trajectory CSVs:
// the static world, the safety envelope, fire-front snapshots and the last
// planned paths. Stored as JSON next to the CSVs.
struct RunRecord {
  WorldBounds bounds;
  std::vector<Obstacle> obstacles;
  double d_eps = 1.0;
  std::vector<std::vector<Vec3>> fire_snapshots;
  std::vector<double> fire_snapshot_times;
  std::vector<Path> planned_paths;
};

void write_run_record(const std::string& path, const RunRecord& record);
RunRecord read_run_record(const std::string& path);

// ---------------------------------------------------------------------------
// Plots (self-contained SVG)
// ---------------------------------------------------------------------------

// Top-down view: obstacles, periodic fire-front snapshots, planned paths and
// the flown trajectories colored by executive mode.
void write_topdown_svg(const std::string& path, const RunRecord& record,
                       const std::vector<TrajectoryFile>& trajectories);

// Clearance-to-nearest-obstacle over time per agent, with a horizontal line
// marking the safety envelope d_eps.
void write_clearance_svg(const std::string& path, const RunRecord& record,
                         const std::vector<TrajectoryFile>& trajectories);

// ---------------------------------------------------------------------------
// Batch summary
// ---------------------------------------------------------------------------

std::string batch_summary_text(const BatchSummary& summary);
void write_batch_summary(const std::string& path, const BatchSummary& summary);

}  // namespace firenav
