#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "firenav/executive.hpp"

using namespace firenav;

namespace {

constexpr double kDt = 0.1;

ExecTelemetry far_telemetry() {
  ExecTelemetry t;
  t.obstacle_distance = 100.0;
  t.theta_fix = 0.5;
  return t;
}

}  // namespace

TEST_CASE("tracking persists while obstacles stay out of range") {
  ExecState s;
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 10.0;
  t.distance_rate = -1.0;
  const ExecDirectives d = exec_update(s, t, {}, kDt);
  CHECK(d.mode == Mode::Tracking);
  CHECK(s.avoid_timer == -1.0);
  CHECK(!s.committed_side.has_value());
}

TEST_CASE("a closing obstacle at the trigger range starts an avoidance episode") {
  ExecConfig cfg;  // d_trigger = 4.5
  ExecTelemetry t = far_telemetry();
  t.distance_rate = -0.3;
  t.candidate_side = 2;

  // Strictly inside the trigger range.
  ExecState s;
  t.obstacle_distance = 4.4;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Avoiding);
  CHECK(s.avoid_timer == 0.0);
  REQUIRE(s.committed_side.has_value());
  CHECK(*s.committed_side == 2);

  // Exactly at the trigger range counts too.
  ExecState s2;
  t.obstacle_distance = 4.5;
  exec_update(s2, t, cfg, kDt);
  CHECK(s2.mode == Mode::Avoiding);
}

TEST_CASE("a receding obstacle never triggers avoidance") {
  ExecState s;
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 2.0;
  t.distance_rate = 0.0;  // not closing
  exec_update(s, t, {}, kDt);
  CHECK(s.mode == Mode::Tracking);
  t.distance_rate = 0.4;  // opening
  exec_update(s, t, {}, kDt);
  CHECK(s.mode == Mode::Tracking);
}

TEST_CASE("avoidance exits only after dwelling and re-aligning") {
  ExecConfig cfg;  // dwell = 1.5 s, eps_theta = 0.01
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 0.0;
  s.committed_side = 1;

  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 3.0;
  t.theta_fix = 0.001;  // aligned from the start

  // 14 steps: timer reaches 1.4 < 1.5, still avoiding.
  for (int i = 0; i < 14; ++i) exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Avoiding);
  CHECK(s.avoid_timer == doctest::Approx(1.4));

  // Step 15: timer 1.5 >= dwell and aligned: back to tracking.
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Tracking);
  CHECK(s.avoid_timer == -1.0);
  CHECK(!s.committed_side.has_value());
}

TEST_CASE("misalignment blocks the exit even after the dwell") {
  ExecConfig cfg;
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 5.0;  // long past the dwell
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 3.0;
  t.theta_fix = 0.2;  // still pointing away
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Avoiding);
  t.theta_fix = 0.005;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Tracking);
}

TEST_CASE("the distance exit policy also requires closing to the envelope") {
  ExecConfig cfg;
  cfg.exit_policy = ExitPolicy::Distance;  // needs d <= d_eps + exit_margin = 1.5
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 5.0;
  ExecTelemetry t = far_telemetry();
  t.theta_fix = 0.0;

  t.obstacle_distance = 3.0;  // aligned + dwelled, but still too far out
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Avoiding);

  t.obstacle_distance = 1.4;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Tracking);
}

TEST_CASE("losing contact satisfies the distance exit policy") {
  ExecConfig cfg;
  cfg.exit_policy = ExitPolicy::Distance;
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 5.0;
  ExecTelemetry t;  // obstacle_distance defaults to +infinity
  t.theta_fix = 0.0;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Tracking);
}

TEST_CASE("no single step both enters and leaves avoidance") {
  ExecConfig cfg;
  ExecState s;
  // Telemetry that would satisfy the exit conditions immediately.
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 4.0;
  t.distance_rate = -0.1;
  t.theta_fix = 0.0;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Avoiding);  // entry wins; exit waits for the dwell
  CHECK(s.avoid_timer == 0.0);      // and the timer has not advanced this step
}

TEST_CASE("an infeasible turning circle requests a replan in hybrid mode") {
  ExecConfig cfg;
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 0.0;
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 3.0;
  t.theta_fix = 0.5;
  t.planner_available = true;
  t.r_min = 2.0;
  t.turn_radius = 1.2;  // tighter than the vehicle can fly

  const ExecDirectives d = exec_update(s, t, cfg, kDt);
  CHECK(d.replan);

  // Without a planner (pure reactive) the directive must stay off.
  ExecState s2;
  s2.mode = Mode::Avoiding;
  s2.avoid_timer = 0.0;
  ExecTelemetry t2 = t;
  t2.planner_available = false;
  CHECK(!exec_update(s2, t2, cfg, kDt).replan);

  // A stationary vehicle reports radius 0, which never counts as infeasible.
  ExecState s3;
  s3.mode = Mode::Avoiding;
  s3.avoid_timer = 0.0;
  ExecTelemetry t3 = t;
  t3.turn_radius = 0.0;
  CHECK(!exec_update(s3, t3, cfg, kDt).replan);

  // Feasible circles never trigger.
  ExecState s4;
  s4.mode = Mode::Avoiding;
  s4.avoid_timer = 0.0;
  ExecTelemetry t4 = t;
  t4.turn_radius = 2.5;
  CHECK(!exec_update(s4, t4, cfg, kDt).replan);
}

TEST_CASE("replanning is suppressed while tracking") {
  ExecConfig cfg;
  ExecState s;  // Tracking
  ExecTelemetry t = far_telemetry();
  t.planner_available = true;
  t.r_min = 2.0;
  t.turn_radius = 0.5;
  CHECK(!exec_update(s, t, cfg, kDt).replan);
}

TEST_CASE("consecutive replans respect the cooldown") {
  ExecConfig cfg;  // replan_cooldown_steps = 10
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 0.0;
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 3.0;
  t.theta_fix = 0.5;  // never exits
  t.planner_available = true;
  t.r_min = 2.0;
  t.turn_radius = 1.0;  // permanently infeasible

  int gap = -1;
  int replans = 0;
  for (int step = 0; step < 40; ++step) {
    const ExecDirectives d = exec_update(s, t, cfg, kDt);
    if (d.replan) {
      ++replans;
      if (gap >= 0) CHECK(gap >= cfg.replan_cooldown_steps);
      gap = 0;
    } else if (gap >= 0) {
      ++gap;
    }
  }
  CHECK(replans >= 2);  // the trigger does re-fire once the cooldown passes
}

TEST_CASE("reaching the active waypoint advances the index") {
  ExecConfig cfg;  // goal_radius = 0.5
  ExecState s;
  ExecTelemetry t = far_telemetry();
  t.dist_to_waypoint = 0.4;
  const ExecDirectives d = exec_update(s, t, cfg, kDt);
  CHECK(d.advance_waypoint);
  CHECK(s.waypoint == 1);

  t.dist_to_waypoint = 0.6;
  const ExecDirectives d2 = exec_update(s, t, cfg, kDt);
  CHECK(!d2.advance_waypoint);
  CHECK(s.waypoint == 1);
}

TEST_CASE("turning circle of a command") {
  CHECK(required_turn_radius(4.0, 2.0) == doctest::Approx(2.0));
  CHECK(required_turn_radius(4.0, -2.0) == doctest::Approx(2.0));
  CHECK(std::isinf(required_turn_radius(4.0, 0.0)));
  CHECK(required_turn_radius(0.0, 2.0) == 0.0);
}

TEST_CASE("the timer sentinel invariant survives randomized telemetry") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist01(0.0, 1.0);
  ExecConfig cfg;
  ExecState s;

  int last_entry_step = -1000;
  for (int step = 0; step < 20000; ++step) {
    ExecTelemetry t;
    t.obstacle_distance = dist01(rng) < 0.3
                              ? 10.0 * dist01(rng)
                              : std::numeric_limits<double>::infinity();
    t.distance_rate = 2.0 * dist01(rng) - 1.0;
    t.theta_fix = 0.3 * (2.0 * dist01(rng) - 1.0);
    t.dist_to_waypoint = 10.0 * dist01(rng);
    t.turn_radius = 4.0 * dist01(rng);
    t.r_min = 2.0;
    t.planner_available = dist01(rng) < 0.5;

    const Mode before = s.mode;
    exec_update(s, t, cfg, kDt);

    // Sentinel: timer is -1 exactly while tracking, non-negative otherwise.
    if (s.mode == Mode::Tracking) {
      CHECK(s.avoid_timer == -1.0);
      CHECK(!s.committed_side.has_value());
    } else {
      CHECK(s.avoid_timer >= 0.0);
      CHECK(s.committed_side.has_value());
    }

    // Anti-chatter: an episode lasts at least the dwell (15 steps at 0.1 s).
    if (before == Mode::Tracking && s.mode == Mode::Avoiding) {
      last_entry_step = step;
    }
    if (before == Mode::Avoiding && s.mode == Mode::Tracking) {
      CHECK(step - last_entry_step >= 15);
    }
  }
}

TEST_CASE("an exit inside the trigger band arms only after the range opens") {
  ExecConfig cfg;  // d_trigger = 4.5, d_eps = 1.0
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 5.0;
  s.committed_side = 1;

  // Exit at range 2.0: the next episode needs the range to open past 3.0
  // (exit distance + safety envelope).
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 2.0;
  t.theta_fix = 0.0;
  exec_update(s, t, cfg, kDt);
  REQUIRE(s.mode == Mode::Tracking);

  // Still closing right after the exit: no bounce-back into avoidance.
  t.distance_rate = -0.5;
  t.obstacle_distance = 1.8;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Tracking);

  // The range opens past exit + envelope, then a new obstacle closes in:
  // avoidance must re-engage even though the range never left the trigger band.
  t.obstacle_distance = 3.1;
  t.distance_rate = 0.5;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Tracking);
  t.obstacle_distance = 2.9;
  t.distance_rate = -4.0;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Avoiding);
}

TEST_CASE("a deep exit caps the re-arm gate at the trigger range") {
  ExecConfig cfg;  // d_trigger = 4.5
  ExecState s;
  s.mode = Mode::Avoiding;
  s.avoid_timer = 5.0;
  s.committed_side = 1;

  // Exit right at the trigger ring: gate = min(4.5, 4.2 + 1.0) = 4.5.
  ExecTelemetry t = far_telemetry();
  t.obstacle_distance = 4.2;
  t.theta_fix = 0.0;
  exec_update(s, t, cfg, kDt);
  REQUIRE(s.mode == Mode::Tracking);
  CHECK(s.rearm_level == doctest::Approx(4.5));

  t.obstacle_distance = 4.6;  // clears the ring: armed again
  exec_update(s, t, cfg, kDt);
  t.obstacle_distance = 4.4;
  t.distance_rate = -0.2;
  exec_update(s, t, cfg, kDt);
  CHECK(s.mode == Mode::Avoiding);
}
