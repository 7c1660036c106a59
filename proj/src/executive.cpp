#include "firenav/executive.hpp"

#include <cmath>

namespace firenav {

ExecDirectives exec_update(ExecState& s, const ExecTelemetry& t, const ExecConfig& cfg,
                           double dt) {
  ExecDirectives out;

  if (t.dist_to_waypoint <= cfg.goal_radius) {
    out.advance_waypoint = true;
    ++s.waypoint;
  }

  if (s.mode == Mode::Tracking) {
    if (t.obstacle_distance > s.rearm_level) s.entry_armed = true;
    if (s.entry_armed && t.obstacle_distance <= cfg.d_trigger && t.distance_rate < 0.0) {
      s.mode = Mode::Avoiding;
      s.avoid_timer = 0.0;
      s.committed_side = t.candidate_side;
      s.prev_theta_valid = false;
      s.entry_armed = false;
    }
  } else {
    s.avoid_timer += dt;
    // A sampled controller can step right across the alignment window without
    // ever satisfying |theta| <= eps, so a sign change through zero between
    // consecutive samples counts as aligned. The raw-difference bound rejects
    // the other sign flip, the one through +/-pi (pointing straight away).
    const bool crossed = s.prev_theta_valid &&
                         (t.theta_fix > 0.0) != (s.prev_theta_fix > 0.0) &&
                         std::abs(t.theta_fix - s.prev_theta_fix) <= kPi / 2.0;
    const bool aligned = std::abs(t.theta_fix) <= cfg.eps_theta || crossed;
    const bool dwelled = s.avoid_timer >= cfg.dwell;
    const bool lost_contact = std::isinf(t.obstacle_distance);
    const bool range_ok = cfg.exit_policy == ExitPolicy::Orientation ||
                          t.obstacle_distance <= cfg.d_eps + cfg.exit_margin || lost_contact;
    s.prev_theta_fix = t.theta_fix;
    s.prev_theta_valid = true;
    if (dwelled && aligned && range_ok) {
      s.mode = Mode::Tracking;
      s.avoid_timer = -1.0;
      s.committed_side.reset();
      s.prev_theta_valid = false;
      // Hysteresis: the next episode may only start after the range opens by a
      // safety envelope over where this one ended (or clears the trigger ring),
      // so an exit inside the trigger band cannot bounce straight back in, yet
      // a genuinely approaching new obstacle is not ignored for long.
      s.entry_armed = false;
      s.rearm_level = std::min(cfg.d_trigger, t.obstacle_distance + cfg.d_eps);
    } else if (t.planner_available && t.turn_radius > 0.0 &&
               t.turn_radius * (1.0 + 1e-9) < t.r_min &&
               s.steps_since_replan >= cfg.replan_cooldown_steps) {
      out.replan = true;
      s.steps_since_replan = -1;  // incremented to 0 below
    }
  }

  if (s.steps_since_replan < std::numeric_limits<int>::max()) ++s.steps_since_replan;
  out.mode = s.mode;
  return out;
}

}  // namespace firenav
