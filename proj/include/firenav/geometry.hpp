#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace firenav {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown when an operation needs a direction but was handed a (near-)zero vector.
struct ZeroVectorError : std::runtime_error {
  ZeroVectorError() : std::runtime_error("zero-length vector has no direction") {}
};

// Thrown when no valid avoidance plane can be built from the given generators.
struct DegeneratePlaneError : std::runtime_error {
  explicit DegeneratePlaneError(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3& operator+=(Vec3 o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(Vec3 o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr bool operator==(const Vec3&) const = default;

  constexpr Vec2 xy() const { return {x, y}; }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr Vec3 operator*(double s, Vec3 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Scalar 2D cross product (z component of the 3D cross of the embedded vectors).
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double norm(Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }

inline constexpr double kDirectionEps = 1e-12;

inline Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  if (n < kDirectionEps) throw ZeroVectorError{};
  return v / n;
}

inline Vec3 normalized(Vec3 v) {
  const double n = norm(v);
  if (n < kDirectionEps) throw ZeroVectorError{};
  return v / n;
}

// Wraps an angle into (-pi, pi]; -pi maps to +pi.
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  else if (a > kPi) a -= 2.0 * kPi;
  return a;
}

// Counter-clockwise angle from `from` to `to`, in (-pi, pi]. Antipodal pairs
// give +pi, never -pi, so the caller gets one well-defined value.
inline double signed_angle(Vec2 from, Vec2 to) {
  if (norm(from) < kDirectionEps || norm(to) < kDirectionEps) throw ZeroVectorError{};
  const double a = std::atan2(cross(from, to), dot(from, to));
  return a <= -kPi ? kPi : a;
}

// Turn-direction selector used by the steering laws:
//   0 when the vectors are exactly aligned,
//  +1 when `to` lies counter-clockwise of `from` (angle in (0, pi]),
//  -1 when it lies clockwise (angle in (-pi, 0)).
inline int turn_sign(Vec2 from, Vec2 to) {
  const double phi = signed_angle(from, to);
  if (phi == 0.0) return 0;
  return phi > 0.0 ? 1 : -1;
}

// Plane through `origin` used to reduce a 3D avoidance problem to a planar one.
// Basis: in_plane_x is the vehicle's orientation vector, in_plane_y is the
// transverse turn axis (orientation x normal), normal completes the frame so
// that in_plane_y x in_plane_x = normal.
struct AvoidancePlane {
  Vec3 origin;
  Vec3 normal;
  Vec3 in_plane_x;
  Vec3 in_plane_y;
};

inline constexpr double kPlaneCollinearEps = 1e-9;

// Builds the avoidance plane spanned by the orientation vector and a direction
// toward (or tangent to) the obstacle. When those are collinear, directions to
// the auxiliary obstacle points are tried instead before giving up.
inline AvoidancePlane avoidance_plane(Vec3 origin, Vec3 orientation, Vec3 tangent,
                                      std::span<const Vec3> aux_points = {}) {
  const Vec3 a = normalized(orientation);

  const auto try_generator = [&](Vec3 g) -> bool {
    const double gn = norm(g);
    if (gn < kDirectionEps) return false;
    return norm(cross(a, g / gn)) > kPlaneCollinearEps;
  };

  Vec3 gen = tangent;
  if (!try_generator(gen)) {
    bool found = false;
    for (const Vec3& p : aux_points) {
      const Vec3 w = p - origin;
      if (try_generator(w)) {
        gen = w;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DegeneratePlaneError(
          "avoidance plane generators are collinear with the orientation vector");
    }
  }

  Vec3 n = normalized(cross(a, gen));
  // Canonicalize the normal's sign so the plane frame is stable while the
  // obstacle direction sweeps across the heading axis (both signs span the
  // same plane; the steering command is invariant to the choice).
  constexpr double tol = 1e-12;
  if (n.z < -tol) {
    n = -n;
  } else if (std::abs(n.z) <= tol) {
    if (n.y < -tol) n = -n;
    else if (std::abs(n.y) <= tol && n.x < 0.0) n = -n;
  }

  AvoidancePlane plane;
  plane.origin = origin;
  plane.in_plane_x = a;
  plane.normal = n;
  plane.in_plane_y = cross(a, plane.normal);
  return plane;
}

// Orthonormal basis change between world coordinates and plane coordinates.
// Plane coordinates are (s, t, n): s along in_plane_x, t along in_plane_y,
// n along the normal.
struct FrameTransform {
  Vec3 origin;
  Vec3 ex, ey, ez;

  static FrameTransform from_plane(const AvoidancePlane& p) {
    return {p.origin, p.in_plane_x, p.in_plane_y, p.normal};
  }

  Vec3 to_local(Vec3 w) const {
    const Vec3 r = w - origin;
    return {dot(r, ex), dot(r, ey), dot(r, ez)};
  }
  Vec3 to_world(Vec3 l) const { return origin + ex * l.x + ey * l.y + ez * l.z; }

  // Direction-only transforms (no origin shift), for velocities and headings.
  Vec3 dir_to_local(Vec3 w) const { return {dot(w, ex), dot(w, ey), dot(w, ez)}; }
  Vec3 dir_to_world(Vec3 l) const { return ex * l.x + ey * l.y + ez * l.z; }

  Vec2 project(Vec3 w) const {
    const Vec3 l = to_local(w);
    return {l.x, l.y};
  }
  Vec2 project_dir(Vec3 w) const { return {dot(w, ex), dot(w, ey)}; }
  Vec3 lift(Vec2 p) const { return origin + ex * p.x + ey * p.y; }
  Vec3 lift_dir(Vec2 d) const { return ex * d.x + ey * d.y; }
};

// Distance from point to segment [a, b] in 2D, with the closest point.
inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, Vec2* closest = nullptr) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  const Vec2 c = a + ab * t;
  if (closest) *closest = c;
  return distance(p, c);
}

inline double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

}  // namespace firenav
