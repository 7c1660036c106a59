#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "firenav/geometry.hpp"

namespace firenav {

// Thrown when a commanded input exceeds the vehicle's declared limits.
// Commands are validated, never clamped silently: an out-of-range command is a
// controller bug and must surface.
struct LimitViolationError : std::runtime_error {
  explicit LimitViolationError(const std::string& what) : std::runtime_error(what) {}
};

struct VehicleLimits {
  double v_max = 1.0;  // max linear speed (m/s)
  double u_max = 1.0;  // max turn rate (rad/s)

  // Tightest kinematically feasible turcircle at full speed.
  double r_min() const { return v_max / u_max; }
};

// Relative tolerance for limit checks: steering laws command exactly +/-u_max
// and speeds assembled from rounded vector sums, so allow for last-bit noise.
inline constexpr double kLimitSlack = 1e-9;

inline void check_speed(double v, const VehicleLimits& lim) {
  if (!(v >= -kLimitSlack && v <= lim.v_max * (1.0 + kLimitSlack) + kLimitSlack)) {
    throw LimitViolationError("speed command " + std::to_string(v) +
                              " outside [0, " + std::to_string(lim.v_max) + "]");
  }
}

inline void check_turn_rate(double u, const VehicleLimits& lim) {
  if (!(std::abs(u) <= lim.u_max * (1.0 + kLimitSlack) + kLimitSlack)) {
    throw LimitViolationError("turn-rate command " + std::to_string(u) +
                              " outside [-" + std::to_string(lim.u_max) + ", " +
                              std::to_string(lim.u_max) + "]");
  }
}

// ---------------------------------------------------------------------------
// Planar unicycle: x' = v cos(theta), y' = v sin(theta), theta' = u.
// Forward motion only (v >= 0).
// ---------------------------------------------------------------------------

struct UnicycleState {
  Vec2 p;
  double theta = 0.0;

  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
};

inline UnicycleState step_unicycle(const UnicycleState& s, double v, double u,
                                   const VehicleLimits& lim, double dt) {
  check_speed(v, lim);
  check_turn_rate(u, lim);
  UnicycleState n;
  n.p.x = s.p.x + v * std::cos(s.theta) * dt;
  n.p.y = s.p.y + v * std::sin(s.theta) * dt;
  n.theta = wrap_angle(s.theta + u * dt);
  return n;
}

// ---------------------------------------------------------------------------
// 3D orientation-vector model: e' = V a, a' = u with u constrained orthogonal
// to a and ||a|| = 1. The step projects u onto the plane orthogonal to a and
// renormalizes a afterwards, so unit length holds exactly under iteration.
// ---------------------------------------------------------------------------

struct Body3DState {
  Vec3 e;                    // position
  Vec3 a = {1.0, 0.0, 0.0};  // unit orientation vector
};

inline Body3DState step_body3d(const Body3DState& s, double v, Vec3 u,
                               const VehicleLimits& lim, double dt) {
  check_speed(v, lim);
  if (!(norm(u) <= lim.u_max * (1.0 + kLimitSlack) + kLimitSlack)) {
    throw LimitViolationError("turn vector magnitude " + std::to_string(norm(u)) +
                              " exceeds " + std::to_string(lim.u_max));
  }
  const Vec3 u_perp = u - s.a * dot(u, s.a);
  Body3DState n;
  n.e = s.e + s.a * (v * dt);
  n.a = normalized(s.a + u_perp * dt);
  return n;
}

// ---------------------------------------------------------------------------
// Heading-angle model: yaw beta and pitch alpha steer the velocity direction
//   x' = v cos(beta) cos(alpha), y' = v sin(beta) cos(alpha), z' = v sin(alpha)
// with both angular rates bounded by u_max and alpha kept in [-pi/2, pi/2].
// ---------------------------------------------------------------------------

struct HeadingState {
  Vec3 p;
  double alpha = 0.0;  // pitch
  double beta = 0.0;   // yaw
};

inline HeadingState step_heading(const HeadingState& s, double v, double alpha_rate,
                                 double beta_rate, const VehicleLimits& lim, double dt) {
  check_speed(v, lim);
  check_turn_rate(alpha_rate, lim);
  check_turn_rate(beta_rate, lim);
  HeadingState n;
  n.p.x = s.p.x + v * std::cos(s.beta) * std::cos(s.alpha) * dt;
  n.p.y = s.p.y + v * std::sin(s.beta) * std::cos(s.alpha) * dt;
  n.p.z = s.p.z + v * std::sin(s.alpha) * dt;
  n.alpha = std::clamp(s.alpha + alpha_rate * dt, -kPi / 2.0, kPi / 2.0);
  n.beta = wrap_angle(s.beta + beta_rate * dt);
  return n;
}

// ---------------------------------------------------------------------------
// Terrain-following ground vehicle: a planar unicycle whose height is slaved
// to the terrain surface under it. HeightFn is any callable (x, y) -> z and
// may throw if the vehicle leaves the mapped area.
// ---------------------------------------------------------------------------

struct UgvState {
  Vec2 p;
  double theta = 0.0;
  double z = 0.0;

  Vec3 position() const { return {p.x, p.y, z}; }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
};

template <class HeightFn>
UgvState step_ugv(const UgvState& s, double v, double u, const VehicleLimits& lim,
                  HeightFn&& height, double dt) {
  UnicycleState flat{s.p, s.theta};
  const UnicycleState moved = step_unicycle(flat, v, u, lim, dt);
  UgvState n;
  n.p = moved.p;
  n.theta = moved.theta;
  n.z = height(moved.p.x, moved.p.y);
  return n;
}

}  // namespace firenav
