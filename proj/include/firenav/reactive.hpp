#pragma once

#include <optional>
#include <stdexcept>

#include "firenav/geometry.hpp"
#include "firenav/vehicles.hpp"
#include "firenav/world.hpp"

namespace firenav {

// Thrown when an obstacle moves at or above the vehicle's top speed, leaving
// no speed margin for the occlusion construction.
struct ObstacleTooFastError : std::runtime_error {
  ObstacleTooFastError()
      : std::runtime_error("obstacle speed leaves no margin below the vehicle's top speed") {}
};

struct ReactiveConfig {
  double alpha_safe = kPi / 5.0;  // escape-angle enlargement, in (0, pi/2)
  double eps_theta = 0.01;        // heading-aligned tolerance (rad)
  int side_tiebreak = 1;          // 1 = counter-clockwise side wins ties, 2 = clockwise
};

// ---------------------------------------------------------------------------
// Target tracking: full speed ahead, bang-bang turn toward the target.
// ---------------------------------------------------------------------------

struct TrackCommand2D {
  double v = 0.0;
  double u = 0.0;
  double theta_fix = 0.0;  // signed heading error toward the target
};

TrackCommand2D track_target(Vec2 position, double theta, Vec2 target,
                            const ReactiveConfig& cfg, const VehicleLimits& lim);

struct TrackCommand3D {
  double v = 0.0;
  Vec3 u;
  double theta_fix = 0.0;  // unsigned angle between orientation and target direction
};

TrackCommand3D track_target_3d(Vec3 position, Vec3 orientation, Vec3 target,
                               const ReactiveConfig& cfg, const VehicleLimits& lim);

// ---------------------------------------------------------------------------
// Occlusion-cone avoidance. The planar core works in one fixed frame: the two
// vision-cone boundaries are enlarged outward by alpha_safe, an occlusion
// velocity of magnitude (v_max - ||v_obstacle||) is laid along each enlarged
// boundary, and the side whose combined velocity needs the smaller heading
// change wins. The command is that combined velocity's magnitude plus a
// maximum-rate turn toward it.
// ---------------------------------------------------------------------------

struct PlanarAvoidance {
  int side = 1;          // 1 = counter-clockwise boundary, 2 = clockwise
  double beta = 0.0;     // chosen enlarged boundary bearing
  Vec2 occlusion;        // velocity laid along the enlarged boundary
  Vec2 v_gamma;          // obstacle velocity + occlusion velocity
  double speed = 0.0;    // commanded linear speed
  double turn_rate = 0.0;  // commanded turn rate (counter-clockwise positive)
};

struct PlanarAvoidanceInput {
  double cone_ccw = 0.0;  // vision-cone boundary bearings in the working frame
  double cone_cw = 0.0;
  Vec2 v_obstacle;        // obstacle surface velocity in the working frame
  Vec2 robot_dir;         // robot motion direction in the working frame (unit)
};

PlanarAvoidance avoid_planar(const PlanarAvoidanceInput& in, const ReactiveConfig& cfg,
                             const VehicleLimits& lim,
                             std::optional<int> forced_side = std::nullopt);

// Planar wrapper: reading bearings are world x-y angles (as produced by
// sense_planar); the command is a unicycle (v, u).
struct Avoidance2D {
  int side = 1;
  double beta = 0.0;
  Vec2 occlusion;
  Vec2 v_gamma;
  double v = 0.0;
  double u = 0.0;
};

Avoidance2D avoid_2d(const UnicycleState& state, const SensorReading& reading,
                     const ReactiveConfig& cfg, const VehicleLimits& lim,
                     std::optional<int> forced_side = std::nullopt);

// 3D wrapper: rebuilds the reading's avoidance plane, runs the planar core in
// plane coordinates, and lifts the result. The turn command is the in-plane
// transverse axis scaled by the signed rate, so it is orthogonal to the
// orientation vector by construction. Propagates DegeneratePlaneError when the
// reading cannot span a plane.
struct Avoidance3D {
  int side = 1;
  double beta = 0.0;
  Vec3 occlusion;
  Vec3 v_gamma;
  double v = 0.0;
  Vec3 u;
  double turn_rate = 0.0;  // signed in-plane rate (for feasibility accounting)
};

Avoidance3D avoid_3d(const Body3DState& state, const SensorReading& reading,
                     const ReactiveConfig& cfg, const VehicleLimits& lim,
                     std::optional<int> forced_side = std::nullopt);

}  // namespace firenav
