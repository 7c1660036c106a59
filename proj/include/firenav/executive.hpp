#pragma once

#include <limits>
#include <optional>

#include "firenav/geometry.hpp"

namespace firenav {

enum class Mode { Tracking, Avoiding };

// How an avoidance episode may end (both policies also require the dwell
// timer to have elapsed, which keeps mode flips from chattering):
//  - Orientation: the vehicle points at its waypoint again.
//  - Distance: additionally the obstacle range has shrunk to the safety
//    envelope (boundary-following exit).
enum class ExitPolicy { Orientation, Distance };

struct ExecConfig {
  double d_trigger = 4.5;     // avoidance entry range (m)
  double d_eps = 1.0;         // safety envelope (m)
  double exit_margin = 0.5;   // extra range over d_eps for the Distance exit
  double dwell = 1.5;         // minimum avoidance episode length (s)
  double eps_theta = 0.01;    // waypoint-aligned tolerance (rad)
  double goal_radius = 0.5;   // waypoint acceptance radius (m)
  ExitPolicy exit_policy = ExitPolicy::Orientation;
  int replan_cooldown_steps = 10;
};

struct ExecState {
  Mode mode = Mode::Tracking;
  double avoid_timer = -1.0;  // seconds in the current avoidance episode; -1 while tracking
  int waypoint = 0;           // index of the active waypoint on the current path
  std::optional<int> committed_side;  // avoidance side pinned for the episode
  int steps_since_replan = std::numeric_limits<int>::max();
  double prev_theta_fix = 0.0;   // previous sample's heading error, valid while avoiding
  bool prev_theta_valid = false;
  // Entry fires when the obstacle distance falls TO the trigger. After an exit
  // inside the trigger band the range must first open past rearm_level (exit
  // distance plus one safety envelope, capped at the trigger) before a new
  // episode can start: hysteresis against mode cycling that still reacts to a
  // fresh obstacle closing in.
  bool entry_armed = true;
  double rearm_level = 0.0;
};

// Everything the switcher needs to see about the current step.
struct ExecTelemetry {
  double obstacle_distance = std::numeric_limits<double>::infinity();
  double distance_rate = 0.0;      // d/dt of obstacle_distance
  double theta_fix = 0.0;          // heading error toward the active waypoint (signed or unsigned)
  double dist_to_waypoint = std::numeric_limits<double>::infinity();
  double turn_radius = std::numeric_limits<double>::infinity();  // of the candidate avoidance command
  int candidate_side = 1;          // side the avoidance law would pick this step
  bool planner_available = false;  // replanning only exists in hybrid mode
  double r_min = 0.0;              // vehicle's tightest feasible turn radius
};

struct ExecDirectives {
  Mode mode = Mode::Tracking;
  bool replan = false;
  bool advance_waypoint = false;
};

// Turning circle required by a (v, u) command; 0 when stopped (which
// suppresses infeasibility replanning), infinite when driving straight.
inline double required_turn_radius(double v, double u) {
  if (v == 0.0) return 0.0;
  if (u == 0.0) return std::numeric_limits<double>::infinity();
  return v / std::abs(u);
}

// Advances the mode machine by one control step. Transitions:
//   Tracking -> Avoiding  when the obstacle range is inside d_trigger and
//                         still closing (distance_rate < 0); the episode
//                         timer starts and the candidate side is committed.
//   Avoiding -> Tracking  when the dwell time has elapsed, the vehicle points
//                         at its waypoint (|theta_fix| <= eps_theta), and -
//                         under the Distance policy - the obstacle range is
//                         within d_eps + exit_margin (or the obstacle left
//                         sensor range entirely).
// A step can never both enter and exit Avoiding. While Avoiding in hybrid
// mode, a replan directive fires when the candidate command's turning circle
// is tighter than the vehicle can fly (0 < turn_radius < r_min), rate-limited
// by the replan cooldown.
ExecDirectives exec_update(ExecState& s, const ExecTelemetry& t, const ExecConfig& cfg,
                           double dt);

}  // namespace firenav
