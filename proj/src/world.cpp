#include "firenav/world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace firenav {

// ---------------------------------------------------------------------------
// Terrain
// ---------------------------------------------------------------------------

double TerrainGrid::height(double x, double y) const {
  if (n_cols < 2 || n_rows < 2) throw OutOfBoundsError("terrain grid too small");
  if (!contains(x, y)) {
    throw OutOfBoundsError("terrain query (" + std::to_string(x) + ", " +
                           std::to_string(y) + ") outside mapped area");
  }
  const double gx = (x - x0) / cell;
  const double gy = (y - y0) / cell;  // 0 at the south edge
  int c0 = static_cast<int>(std::floor(gx));
  int s0 = static_cast<int>(std::floor(gy));
  c0 = std::min(c0, n_cols - 2);
  s0 = std::min(s0, n_rows - 2);
  const double fx = gx - c0;
  const double fy = gy - s0;
  // Convert south-based row index to the stored north-based one.
  const auto node = [&](int col, int south_row) {
    return at(n_rows - 1 - south_row, col);
  };
  const double z00 = node(c0, s0);
  const double z10 = node(c0 + 1, s0);
  const double z01 = node(c0, s0 + 1);
  const double z11 = node(c0 + 1, s0 + 1);
  return z00 * (1 - fx) * (1 - fy) + z10 * fx * (1 - fy) + z01 * (1 - fx) * fy +
         z11 * fx * fy;
}

TerrainGrid load_terrain_asc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutOfBoundsError("cannot open terrain file: " + path);
  TerrainGrid g;
  std::string key;
  // Header: ncols, nrows, xllcorner, yllcorner, cellsize (order fixed).
  for (int i = 0; i < 5; ++i) {
    in >> key;
    if (key == "ncols") in >> g.n_cols;
    else if (key == "nrows") in >> g.n_rows;
    else if (key == "xllcorner") in >> g.x0;
    else if (key == "yllcorner") in >> g.y0;
    else if (key == "cellsize") in >> g.cell;
    else throw OutOfBoundsError("unexpected terrain header key: " + key);
  }
  if (g.n_cols < 2 || g.n_rows < 2 || g.cell <= 0) {
    throw OutOfBoundsError("invalid terrain header in " + path);
  }
  g.z.resize(static_cast<size_t>(g.n_cols) * g.n_rows);
  for (double& v : g.z) {
    if (!(in >> v)) throw OutOfBoundsError("terrain file truncated: " + path);
  }
  return g;
}

void save_terrain_asc(const TerrainGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw OutOfBoundsError("cannot write terrain file: " + path);
  out << "ncols " << g.n_cols << "\n";
  out << "nrows " << g.n_rows << "\n";
  out << "xllcorner " << g.x0 << "\n";
  out << "yllcorner " << g.y0 << "\n";
  out << "cellsize " << g.cell << "\n";
  out.precision(10);
  for (int r = 0; r < g.n_rows; ++r) {
    for (int c = 0; c < g.n_cols; ++c) {
      out << g.at(r, c) << (c + 1 == g.n_cols ? '\n' : ' ');
    }
  }
}

// ---------------------------------------------------------------------------
// Distance queries
// ---------------------------------------------------------------------------

namespace {

SurfacePoint planar_result(Vec2 nearest_xy, double d, double z) {
  return {d, {nearest_xy.x, nearest_xy.y, z}};
}

SurfacePoint distance_disc(Vec2 center, double radius, Vec3 p) {
  const Vec2 q = p.xy();
  const double dc = distance(q, center);
  if (dc <= radius || dc < kDirectionEps) return {0.0, p};
  const Vec2 n = center + (q - center) * (radius / dc);
  return planar_result(n, dc - radius, p.z);
}

SurfacePoint distance_rect(const RectObs& r, Vec3 p) {
  const Vec2 q = p.xy();
  const Vec2 hi = r.min + r.size;
  const Vec2 c{std::clamp(q.x, r.min.x, hi.x), std::clamp(q.y, r.min.y, hi.y)};
  if (c == q) return {0.0, p};  // inside
  return planar_result(c, distance(q, c), p.z);
}

SurfacePoint distance_segment(const SegmentObs& s, Vec3 p) {
  Vec2 c;
  const double d = point_segment_distance(p.xy(), s.a, s.b, &c);
  if (d < kDirectionEps) return {0.0, p};
  return planar_result(c, d, p.z);
}

SurfacePoint distance_sphere(const SphereObs& s, Vec3 p) {
  const double dc = distance(p, s.center);
  if (dc <= s.radius || dc < kDirectionEps) return {0.0, p};
  return {dc - s.radius, s.center + (p - s.center) * (s.radius / dc)};
}

SurfacePoint distance_cylinder(const CylinderObs& c, Vec3 p) {
  const double radial = distance(p.xy(), c.axis);
  const double z_top = c.z0 + c.height;
  const Vec2 rim_dir = radial > kDirectionEps
                           ? (p.xy() - c.axis) / radial
                           : Vec2{1.0, 0.0};
  if (p.z >= c.z0 && p.z <= z_top) {
    if (radial <= c.radius) return {0.0, p};  // inside the side wall
    const Vec2 n = c.axis + rim_dir * c.radius;
    return {radial - c.radius, {n.x, n.y, p.z}};
  }
  const double cap_z = p.z > z_top ? z_top : c.z0;
  const double dz = std::abs(p.z - cap_z);
  if (radial <= c.radius) {
    return {dz, {p.x, p.y, cap_z}};  // above/below the cap face
  }
  const Vec2 rim = c.axis + rim_dir * c.radius;
  const double dr = radial - c.radius;
  return {std::hypot(dr, dz), {rim.x, rim.y, cap_z}};
}

SurfacePoint distance_cloud(const CloudObs& c, Vec3 p) {
  SurfacePoint best{std::numeric_limits<double>::infinity(), p};
  for (const Vec3& q : c.points) {
    const double d = distance(p, q);
    if (d < best.dist) best = {d, q};
  }
  return best;
}

}  // namespace

SurfacePoint distance_to(const Obstacle& ob, Vec3 p) {
  return std::visit(
      [&](const auto& shape) -> SurfacePoint {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Disc>) return distance_disc(shape.center, shape.radius, p);
        else if constexpr (std::is_same_v<T, RectObs>) return distance_rect(shape, p);
        else if constexpr (std::is_same_v<T, SegmentObs>) return distance_segment(shape, p);
        else if constexpr (std::is_same_v<T, SphereObs>) return distance_sphere(shape, p);
        else if constexpr (std::is_same_v<T, CylinderObs>) return distance_cylinder(shape, p);
        else return distance_cloud(shape, p);
      },
      ob.shape);
}

void advance_obstacle(Obstacle& ob, double dt) {
  const Vec3 d3 = ob.velocity * dt;
  const Vec2 d2 = d3.xy();
  std::visit(
      [&](auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Disc>) shape.center += d2;
        else if constexpr (std::is_same_v<T, RectObs>) shape.min += d2;
        else if constexpr (std::is_same_v<T, SegmentObs>) { shape.a += d2; shape.b += d2; }
        else if constexpr (std::is_same_v<T, SphereObs>) shape.center += d3;
        else if constexpr (std::is_same_v<T, CylinderObs>) { shape.axis += d2; shape.z0 += d3.z; }
        else {
          auto& cloud = shape;
          for (size_t i = 0; i < cloud.points.size(); ++i) {
            const Vec3 v = i < cloud.velocities.size() ? cloud.velocities[i] : Vec3{};
            cloud.points[i] += v * dt;
          }
        }
      },
      ob.shape);
}

// ---------------------------------------------------------------------------
// Planar sensing
// ---------------------------------------------------------------------------

namespace {

struct ConeExtent {
  double ccw = 0.0;
  double cw = 0.0;
  bool valid = false;
};

// Vision cone of a circle of radius rho centred at c, seen from p (2D).
ConeExtent circle_cone(Vec2 p, Vec2 c, double rho) {
  const double d = distance(p, c);
  const double theta_c = std::atan2(c.y - p.y, c.x - p.x);
  if (d <= rho || d < kDirectionEps) {
    return {theta_c + kPi / 2.0, theta_c - kPi / 2.0, true};  // grazing contact
  }
  const double half = std::asin(std::clamp(rho / d, 0.0, 1.0));
  return {theta_c + half, theta_c - half, true};
}

// Vision cone of a point set seen from p (2D): extremal bearings measured
// relative to the line of sight to the nearest point, so the extent is
// well-defined even when bearings straddle the +/-pi seam.
ConeExtent points_cone(Vec2 p, Vec2 nearest, const std::vector<Vec2>& pts) {
  const Vec2 los = nearest - p;
  if (norm(los) < kDirectionEps) return {};
  const double theta_n = std::atan2(los.y, los.x);
  double lo = 0.0, hi = 0.0;
  for (const Vec2& q : pts) {
    const Vec2 w = q - p;
    if (norm(w) < kDirectionEps) continue;
    const double delta = signed_angle(los, w);
    lo = std::min(lo, delta);
    hi = std::max(hi, delta);
  }
  return {theta_n + hi, theta_n + lo, true};
}

Vec3 rigid_velocity(const Obstacle& ob) { return ob.velocity; }

}  // namespace

std::vector<SensorReading> sense_planar(Vec2 p, double z, const World& world,
                                        double sensor_range) {
  std::vector<SensorReading> out;
  const Vec3 p3{p.x, p.y, z};
  for (const Obstacle& ob : world.obstacles) {
    const SurfacePoint sp = distance_to(ob, p3);
    if (sp.dist > sensor_range) continue;

    SensorReading r;
    r.obstacle_id = ob.id;
    r.dist = sp.dist;
    r.nearest = sp.nearest;
    r.surface_velocity = rigid_velocity(ob);

    ConeExtent cone;
    std::visit(
        [&](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, Disc>) {
            cone = circle_cone(p, shape.center, shape.radius);
          } else if constexpr (std::is_same_v<T, RectObs>) {
            const Vec2 hi = shape.min + shape.size;
            cone = points_cone(p, sp.nearest.xy(),
                               {shape.min, {hi.x, shape.min.y}, hi, {shape.min.x, hi.y}});
          } else if constexpr (std::is_same_v<T, SegmentObs>) {
            cone = points_cone(p, sp.nearest.xy(), {shape.a, shape.b});
          } else if constexpr (std::is_same_v<T, SphereObs>) {
            const double dz = z - shape.center.z;
            if (std::abs(dz) < shape.radius) {
              const double rho = std::sqrt(shape.radius * shape.radius - dz * dz);
              cone = circle_cone(p, shape.center.xy(), rho);
            }
          } else if constexpr (std::is_same_v<T, CylinderObs>) {
            if (z >= shape.z0 && z <= shape.z0 + shape.height) {
              cone = circle_cone(p, shape.axis, shape.radius);
            }
          } else {
            const auto& cloud = shape;
            std::vector<Vec2> visible;
            visible.reserve(cloud.points.size());
            size_t nearest_i = 0;
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < cloud.points.size(); ++i) {
              const double d = distance(p, cloud.points[i].xy());
              if (d <= sensor_range) visible.push_back(cloud.points[i].xy());
              if (d < best) { best = d; nearest_i = i; }
            }
            if (best > sensor_range) { cone.valid = false; return; }
            r.dist = best;
            r.nearest = {cloud.points[nearest_i].x, cloud.points[nearest_i].y, z};
            r.surface_velocity = nearest_i < cloud.velocities.size()
                                     ? cloud.velocities[nearest_i]
                                     : Vec3{};
            cone = points_cone(p, r.nearest.xy(), visible);
          }
        },
        ob.shape);

    if (!cone.valid) continue;
    r.cone_ccw = cone.ccw;
    r.cone_cw = cone.cw;
    const Vec2 to_n = r.nearest.xy() - p;
    r.tangent = norm(to_n) > kDirectionEps
                    ? Vec3{to_n.x / norm(to_n), to_n.y / norm(to_n), 0.0}
                    : Vec3{1.0, 0.0, 0.0};
    out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const SensorReading& a, const SensorReading& b) {
    return a.dist < b.dist;
  });
  return out;
}

// ---------------------------------------------------------------------------
// 3D sensing
// ---------------------------------------------------------------------------

namespace {

// Two tangent-ish directions at the nearest point, used both as auxiliary
// plane generators (vertical-preferring first, per the wall fallback) and to
// synthesize nearby surface hint points.
std::array<Vec3, 2> surface_hints(Vec3 p, Vec3 nearest) {
  const Vec3 to_n = nearest - p;
  Vec3 t_side = cross(to_n, Vec3{0, 0, 1});
  if (norm(t_side) < 1e-9) t_side = cross(to_n, Vec3{1, 0, 0});
  t_side = normalized(t_side);
  const Vec3 t_vert = normalized(cross(t_side, to_n));  // in the vertical plane of to_n
  const double eps = std::max(0.25, 0.05 * norm(to_n));
  return {nearest + t_vert * eps, nearest + t_side * eps};
}

struct PlaneCone {
  AvoidancePlane plane;
  double ccw = 0.0;
  double cw = 0.0;
  Vec3 tangent;  // generator to store on the reading
  bool valid = false;
};

// Builds the avoidance plane for an obstacle whose silhouette is bounded by
// the sphere (center, rho), and measures the in-plane vision cone.
PlaneCone sphere_like_cone(Vec3 p, Vec3 orientation, Vec3 nearest, Vec3 center, double rho) {
  PlaneCone pc;
  const Vec3 to_n = nearest - p;
  if (norm(to_n) < kDirectionEps) return pc;
  const auto hints = surface_hints(p, nearest);
  const Vec3 aux[2] = {hints[0], hints[1]};
  pc.plane = avoidance_plane(p, orientation, to_n, std::span<const Vec3>(aux, 2));
  const FrameTransform ft = FrameTransform::from_plane(pc.plane);

  const Vec3 c_local = ft.to_local(center);
  const double off = c_local.z;                       // center offset from the plane
  const Vec2 c_ip{c_local.x, c_local.y};
  const double d_ip = norm(c_ip);
  const double r_ip2 = rho * rho - off * off;
  const double r_ip = r_ip2 > 0.0 ? std::sqrt(r_ip2) : 0.0;
  const double theta_c = d_ip > kDirectionEps ? std::atan2(c_ip.y, c_ip.x) : 0.0;
  if (d_ip <= r_ip || d_ip < kDirectionEps) {
    pc.ccw = theta_c + kPi / 2.0;
    pc.cw = theta_c - kPi / 2.0;
  } else {
    const double half = std::asin(std::clamp(r_ip / d_ip, 0.0, 1.0));
    pc.ccw = theta_c + half;
    pc.cw = theta_c - half;
  }
  // Store a generator that always rebuilds this exact plane: the direction to
  // the nearest point unless that is collinear with the orientation, in which
  // case the transverse in-plane axis.
  const Vec3 a = normalized(orientation);
  const Vec3 n_dir = normalized(to_n);
  pc.tangent = norm(cross(a, n_dir)) > kPlaneCollinearEps ? n_dir : pc.plane.in_plane_y;
  pc.valid = true;
  return pc;
}

// Same, but the silhouette comes from a point set (fire front, terrain
// samples, planar shapes' corners).
PlaneCone points_cone_3d(Vec3 p, Vec3 orientation, Vec3 nearest,
                         const std::vector<Vec3>& pts) {
  PlaneCone pc;
  const Vec3 to_n = nearest - p;
  if (norm(to_n) < kDirectionEps) return pc;
  const auto hints = surface_hints(p, nearest);
  std::vector<Vec3> aux{hints[0], hints[1]};
  for (const Vec3& q : pts) aux.push_back(q);
  pc.plane = avoidance_plane(p, orientation, to_n, aux);
  const FrameTransform ft = FrameTransform::from_plane(pc.plane);

  const Vec2 los = ft.project_dir(to_n);
  if (norm(los) < kDirectionEps) return pc;
  const double theta_n = std::atan2(los.y, los.x);
  double lo = 0.0, hi = 0.0;
  for (const Vec3& q : pts) {
    const Vec2 w = ft.project_dir(q - p);
    if (norm(w) < kDirectionEps) continue;
    const double delta = signed_angle(los, w);
    lo = std::min(lo, delta);
    hi = std::max(hi, delta);
  }
  pc.ccw = theta_n + hi;
  pc.cw = theta_n + lo;
  const Vec3 a = normalized(orientation);
  const Vec3 n_dir = normalized(to_n);
  pc.tangent = norm(cross(a, n_dir)) > kPlaneCollinearEps ? n_dir : pc.plane.in_plane_y;
  pc.valid = true;
  return pc;
}

}  // namespace

std::vector<SensorReading> sense_3d(Vec3 p, Vec3 orientation, const World& world,
                                    double sensor_range) {
  std::vector<SensorReading> out;
  for (const Obstacle& ob : world.obstacles) {
    const SurfacePoint sp = distance_to(ob, p);
    if (sp.dist > sensor_range) continue;

    SensorReading r;
    r.obstacle_id = ob.id;
    r.dist = sp.dist;
    r.nearest = sp.nearest;
    r.surface_velocity = rigid_velocity(ob);

    PlaneCone pc;
    std::visit(
        [&](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, SphereObs>) {
            pc = sphere_like_cone(p, orientation, sp.nearest, shape.center, shape.radius);
          } else if constexpr (std::is_same_v<T, CylinderObs>) {
            const Vec3 c_eff{shape.axis.x, shape.axis.y,
                             std::clamp(p.z, shape.z0, shape.z0 + shape.height)};
            pc = sphere_like_cone(p, orientation, sp.nearest, c_eff, shape.radius);
          } else if constexpr (std::is_same_v<T, Disc>) {
            const Vec3 c_eff{shape.center.x, shape.center.y, p.z};
            pc = sphere_like_cone(p, orientation, sp.nearest, c_eff, shape.radius);
          } else if constexpr (std::is_same_v<T, RectObs>) {
            const Vec2 hi = shape.min + shape.size;
            pc = points_cone_3d(p, orientation, sp.nearest,
                                {{shape.min.x, shape.min.y, p.z},
                                 {hi.x, shape.min.y, p.z},
                                 {hi.x, hi.y, p.z},
                                 {shape.min.x, hi.y, p.z}});
          } else if constexpr (std::is_same_v<T, SegmentObs>) {
            pc = points_cone_3d(p, orientation, sp.nearest,
                                {{shape.a.x, shape.a.y, p.z}, {shape.b.x, shape.b.y, p.z}});
          } else {
            const auto& cloud = shape;
            std::vector<Vec3> visible;
            visible.reserve(cloud.points.size());
            size_t nearest_i = 0;
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < cloud.points.size(); ++i) {
              const double d = distance(p, cloud.points[i]);
              if (d <= sensor_range) visible.push_back(cloud.points[i]);
              if (d < best) { best = d; nearest_i = i; }
            }
            if (best > sensor_range) return;
            r.dist = best;
            r.nearest = cloud.points[nearest_i];
            r.surface_velocity = nearest_i < cloud.velocities.size()
                                     ? cloud.velocities[nearest_i]
                                     : Vec3{};
            pc = points_cone_3d(p, orientation, r.nearest, visible);
          }
        },
        ob.shape);

    if (!pc.valid) continue;
    r.cone_ccw = pc.ccw;
    r.cone_cw = pc.cw;
    r.tangent = pc.tangent;
    out.push_back(r);
  }

  if (world.terrain_is_obstacle && world.terrain) {
    const TerrainGrid& g = *world.terrain;
    std::vector<Vec3> samples;
    const int c_lo = std::max(0, static_cast<int>(std::floor((p.x - sensor_range - g.x0) / g.cell)));
    const int c_hi = std::min(g.n_cols - 1, static_cast<int>(std::ceil((p.x + sensor_range - g.x0) / g.cell)));
    const int s_lo = std::max(0, static_cast<int>(std::floor((p.y - sensor_range - g.y0) / g.cell)));
    const int s_hi = std::min(g.n_rows - 1, static_cast<int>(std::ceil((p.y + sensor_range - g.y0) / g.cell)));
    for (int s = s_lo; s <= s_hi; ++s) {
      for (int c = c_lo; c <= c_hi; ++c) {
        samples.push_back({g.x0 + c * g.cell, g.y0 + s * g.cell, g.at(g.n_rows - 1 - s, c)});
      }
    }
    if (g.contains(p.x, p.y)) samples.push_back({p.x, p.y, g.height(p.x, p.y)});

    Vec3 nearest;
    double best = std::numeric_limits<double>::infinity();
    std::vector<Vec3> visible;
    for (const Vec3& q : samples) {
      const double d = distance(p, q);
      if (d <= sensor_range) visible.push_back(q);
      if (d < best) { best = d; nearest = q; }
    }
    if (best <= sensor_range && !visible.empty()) {
      const PlaneCone pc = points_cone_3d(p, orientation, nearest, visible);
      if (pc.valid) {
        SensorReading r;
        r.obstacle_id = -1;
        r.dist = best;
        r.nearest = nearest;
        r.surface_velocity = {};
        r.cone_ccw = pc.ccw;
        r.cone_cw = pc.cw;
        r.tangent = pc.tangent;
        out.push_back(r);
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const SensorReading& a, const SensorReading& b) {
    return a.dist < b.dist;
  });
  return out;
}

double min_clearance(Vec3 p, const World& world, bool include_terrain) {
  double best = std::numeric_limits<double>::infinity();
  for (const Obstacle& ob : world.obstacles) {
    best = std::min(best, distance_to(ob, p).dist);
  }
  if (include_terrain && world.terrain && world.terrain->contains(p.x, p.y)) {
    best = std::min(best, p.z - world.terrain->height(p.x, p.y));
  }
  return best;
}

}  // namespace firenav
