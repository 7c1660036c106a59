#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "firenav/executive.hpp"
#include "firenav/fire.hpp"
#include "firenav/scenario.hpp"

namespace firenav {

enum class SimStatus { GoalReached, Timeout, SafetyViolation, MissionFailed };

std::string to_string(SimStatus s);

// One logged control step. Samples are spaced exactly dt apart, starting at
// t = 0 with the initial state; commands are the ones applied over [t, t+dt).
struct TrajectorySample {
  double t = 0.0;
  Vec3 pos;
  double heading = 0.0;  // yaw (unicycle/ugv: theta, body3d: yaw of the orientation vector)
  Mode mode = Mode::Tracking;
  double v = 0.0;
  double u = 0.0;  // planar turn rate, or the signed in-plane rate for 3D vehicles
  double min_clearance = std::numeric_limits<double>::infinity();
};

struct AgentMetrics {
  int agent_id = 0;
  double path_length = 0.0;     // Euclidean distance travelled
  double completion_time = 0.0; // time the final goal was accepted (end time otherwise)
  double min_clearance = std::numeric_limits<double>::infinity();
  double turn_effort = 0.0;     // sum of absolute heading changes (rad)
  int replans = 0;
  bool reached = false;
};

struct Metrics {
  double path_length = 0.0;  // summed over agents
  double mission_time = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();
  double turn_effort = 0.0;
  int replans = 0;
  std::optional<double> energy;  // present when the mission defines an energy model
};

struct SimResult {
  SimStatus status = SimStatus::Timeout;
  std::string message;  // cause, for the failure statuses
  // Index-aligned with agents sorted by ascending id (the update order).
  std::vector<std::vector<TrajectorySample>> trajectories;
  std::vector<AgentMetrics> agent_metrics;
  Metrics metrics;
  std::vector<double> replan_times;
  std::vector<Path> planned_paths;              // the path each agent was last following
  std::vector<std::vector<Vec3>> fire_snapshots;  // periodic fire-front point sets
  std::vector<double> fire_snapshot_times;
};

// Runs the scenario to completion: fixed-dt loop, each step advancing the
// fire front, then the moving obstacles, then every agent in ascending id
// order against the already-updated world. Deterministic for a fixed input.
SimResult simulate(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Mission composition (shared by the simulator and the coverage front end)
// ---------------------------------------------------------------------------

// Everything derived from a mission block before anyone moves: the ground
// partition (k-means over a uniform cell grid, regions ordered south-to-north
// then west-to-east), one sweep route per region, and per-region victim lists
// prioritized by distance to the fire front at t = 0.
struct MissionPlan {
  std::vector<GroundRect> regions;                  // one per partition
  std::vector<std::vector<Vec3>> coverage_routes;   // lawnmower sweep per region
  std::vector<std::vector<Victim>> rescue_victims;  // prioritized, per region
  std::vector<std::vector<Vec3>> rescue_routes;     // victims then safe zone
};

MissionPlan compose_mission_plan(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Paired-seed batch comparison
// ---------------------------------------------------------------------------

struct PairOutcome {
  std::uint64_t seed = 0;
  bool a_ok = false;
  bool b_ok = false;
  Metrics a;
  Metrics b;
  std::string a_error;
  std::string b_error;
};

struct BatchSummary {
  PlannerMode mode_a = PlannerMode::Hybrid;
  PlannerMode mode_b = PlannerMode::Reactive;
  int pairs = 0;
  int both_ok = 0;
  int a_wins = 0;         // a succeeded and beat b on both length and time (or b failed)
  double win_rate = 0.0;  // a_wins / pairs
  double median_length_gain = 0.0;  // median over both-ok pairs of (len_b - len_a) / len_b
  double median_time_gain = 0.0;    // same for mission time
  std::vector<PairOutcome> outcomes;  // in seed order
  std::vector<std::string> errors;
};

// For every seed in [seed_lo, seed_hi], builds the randomized variant once
// and runs it under both planner modes, so each pair shares an identical
// world. Results are merged in seed order regardless of execution order.
// Throws std::invalid_argument on an empty seed range.
BatchSummary run_batch(const Scenario& base, std::uint64_t seed_lo, std::uint64_t seed_hi,
                       PlannerMode mode_a, PlannerMode mode_b);

}  // namespace firenav
