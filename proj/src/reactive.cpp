#include "firenav/reactive.hpp"

#include <cmath>

namespace firenav {

TrackCommand2D track_target(Vec2 position, double theta, Vec2 target,
                            const ReactiveConfig& cfg, const VehicleLimits& lim) {
  const Vec2 to_target = target - position;
  TrackCommand2D cmd;
  cmd.v = lim.v_max;
  if (norm(to_target) < kDirectionEps) {
    return cmd;  // on top of the target: hold heading
  }
  cmd.theta_fix = wrap_angle(std::atan2(to_target.y, to_target.x) - theta);
  if (std::abs(cmd.theta_fix) > cfg.eps_theta) {
    cmd.u = cmd.theta_fix > 0.0 ? lim.u_max : -lim.u_max;
  }
  return cmd;
}

TrackCommand3D track_target_3d(Vec3 position, Vec3 orientation, Vec3 target,
                               const ReactiveConfig& cfg, const VehicleLimits& lim) {
  const Vec3 a = normalized(orientation);
  const Vec3 to_target = target - position;
  TrackCommand3D cmd;
  cmd.v = lim.v_max;
  if (norm(to_target) < kDirectionEps) return cmd;
  const Vec3 w = normalized(to_target);
  cmd.theta_fix = std::atan2(norm(cross(a, w)), dot(a, w));
  if (cmd.theta_fix <= cfg.eps_theta) return cmd;

  // Turn axis: the component of the target direction transverse to the
  // current orientation. Degenerate (antipodal) targets pick a deterministic
  // horizontal-left axis, falling back to any perpendicular.
  Vec3 axis = w - a * dot(w, a);
  if (norm(axis) < kDirectionEps) {
    axis = cross(Vec3{0, 0, 1}, a);
    if (norm(axis) < kDirectionEps) axis = cross(Vec3{1, 0, 0}, a);
  }
  cmd.u = normalized(axis) * lim.u_max;
  return cmd;
}

PlanarAvoidance avoid_planar(const PlanarAvoidanceInput& in, const ReactiveConfig& cfg,
                             const VehicleLimits& lim, std::optional<int> forced_side) {
  const double margin = lim.v_max - norm(in.v_obstacle);
  if (margin <= 0.0) throw ObstacleTooFastError{};

  const double beta[2] = {in.cone_ccw + cfg.alpha_safe, in.cone_cw - cfg.alpha_safe};
  Vec2 occl[2], vg[2];
  double dev[2];
  for (int s = 0; s < 2; ++s) {
    occl[s] = Vec2{std::cos(beta[s]), std::sin(beta[s])} * margin;
    vg[s] = in.v_obstacle + occl[s];
    dev[s] = norm(vg[s]) < kDirectionEps ? kPi : std::abs(signed_angle(vg[s], in.robot_dir));
  }

  int pick;
  if (forced_side) {
    pick = *forced_side == 2 ? 1 : 0;
  } else if (std::abs(dev[0] - dev[1]) <= 1e-12) {
    pick = cfg.side_tiebreak == 2 ? 1 : 0;
  } else {
    pick = dev[0] < dev[1] ? 0 : 1;
  }

  PlanarAvoidance out;
  out.side = pick + 1;
  out.beta = beta[pick];
  out.occlusion = occl[pick];
  out.v_gamma = vg[pick];
  // ||v_obstacle + occlusion|| <= v_max exactly; clamp away last-bit excess.
  out.speed = std::min(norm(out.v_gamma), lim.v_max);
  if (norm(out.v_gamma) < kDirectionEps) {
    out.turn_rate = 0.0;
  } else {
    out.turn_rate = -lim.u_max * turn_sign(out.v_gamma, in.robot_dir);
  }
  return out;
}

Avoidance2D avoid_2d(const UnicycleState& state, const SensorReading& reading,
                     const ReactiveConfig& cfg, const VehicleLimits& lim,
                     std::optional<int> forced_side) {
  PlanarAvoidanceInput in;
  in.cone_ccw = reading.cone_ccw;
  in.cone_cw = reading.cone_cw;
  in.v_obstacle = reading.surface_velocity.xy();
  in.robot_dir = state.heading();
  const PlanarAvoidance core = avoid_planar(in, cfg, lim, forced_side);
  Avoidance2D out;
  out.side = core.side;
  out.beta = core.beta;
  out.occlusion = core.occlusion;
  out.v_gamma = core.v_gamma;
  out.v = core.speed;
  out.u = core.turn_rate;
  return out;
}

Avoidance3D avoid_3d(const Body3DState& state, const SensorReading& reading,
                     const ReactiveConfig& cfg, const VehicleLimits& lim,
                     std::optional<int> forced_side) {
  const Vec3 aux[1] = {reading.nearest};
  const AvoidancePlane plane =
      avoidance_plane(state.e, state.a, reading.tangent, std::span<const Vec3>(aux, 1));
  const FrameTransform ft = FrameTransform::from_plane(plane);

  PlanarAvoidanceInput in;
  in.cone_ccw = reading.cone_ccw;
  in.cone_cw = reading.cone_cw;
  in.v_obstacle = ft.project_dir(reading.surface_velocity);
  in.robot_dir = ft.project_dir(state.a);  // (1, 0) by construction
  const PlanarAvoidance core = avoid_planar(in, cfg, lim, forced_side);

  Avoidance3D out;
  out.side = core.side;
  out.beta = core.beta;
  out.occlusion = ft.lift_dir(core.occlusion);
  out.v_gamma = ft.lift_dir(core.v_gamma);
  out.v = core.speed;
  out.turn_rate = core.turn_rate;
  out.u = plane.in_plane_y * core.turn_rate;
  return out;
}

}  // namespace firenav
