#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "firenav/geometry.hpp"

namespace firenav {

// Thrown when a query leaves the mapped terrain area or the world bounds.
struct OutOfBoundsError : std::runtime_error {
  explicit OutOfBoundsError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Terrain: regular elevation grid with bilinear interpolation between nodes.
// Stored row-major with row 0 at the NORTH edge (the on-disk convention);
// node (row r, col c) sits at world (x0 + c*cell, y0 + (n_rows-1-r)*cell).
// ---------------------------------------------------------------------------

struct TerrainGrid {
  int n_cols = 0;
  int n_rows = 0;
  double x0 = 0.0;   // west edge (x of column 0)
  double y0 = 0.0;   // south edge (y of the last row)
  double cell = 1.0; // node spacing
  std::vector<double> z;  // n_rows * n_cols values, row 0 = north

  double at(int row, int col) const { return z[static_cast<size_t>(row) * n_cols + col]; }
  double& at(int row, int col) { return z[static_cast<size_t>(row) * n_cols + col]; }

  double min_x() const { return x0; }
  double max_x() const { return x0 + (n_cols - 1) * cell; }
  double min_y() const { return y0; }
  double max_y() const { return y0 + (n_rows - 1) * cell; }

  bool contains(double x, double y) const {
    return x >= min_x() && x <= max_x() && y >= min_y() && y <= max_y();
  }

  // Bilinear surface height; throws OutOfBoundsError outside the node hull.
  double height(double x, double y) const;
};

TerrainGrid load_terrain_asc(const std::string& path);
void save_terrain_asc(const TerrainGrid& g, const std::string& path);

// ---------------------------------------------------------------------------
// Obstacles. Planar shapes (Disc, RectObs, SegmentObs) measure distance in the
// x-y plane and pass the query's z through; volumetric shapes measure in 3D.
// CloudObs is a deformable obstacle sampled as boundary points with per-point
// velocities (used for the fire front and for terrain proximity sensing).
// ---------------------------------------------------------------------------

struct Disc {
  Vec2 center;
  double radius = 1.0;
};

struct RectObs {
  Vec2 min;
  Vec2 size;
};

struct SegmentObs {
  Vec2 a, b;
};

struct SphereObs {
  Vec3 center;
  double radius = 1.0;
};

struct CylinderObs {
  Vec2 axis;          // x-y of the vertical axis
  double z0 = 0.0;    // base height
  double height = 1.0;
  double radius = 1.0;
};

struct CloudObs {
  std::vector<Vec3> points;
  std::vector<Vec3> velocities;  // same length as points (or empty = static)
};

using ObstacleShape = std::variant<Disc, RectObs, SegmentObs, SphereObs, CylinderObs, CloudObs>;

struct Obstacle {
  int id = 0;
  ObstacleShape shape;
  Vec3 velocity;  // rigid translation rate; CloudObs uses per-point velocities
};

struct SurfacePoint {
  double dist = 0.0;  // 0 when the query point is inside the obstacle
  Vec3 nearest;       // nearest surface point (== query point when inside)
};

// Exact distance to the obstacle surface. Planar shapes ignore z.
SurfacePoint distance_to(const Obstacle& ob, Vec3 p);

// Moves the obstacle by its velocity for dt (clouds move per-point).
void advance_obstacle(Obstacle& ob, double dt);

// ---------------------------------------------------------------------------
// World: bounds + optional terrain + obstacle set.
// ---------------------------------------------------------------------------

struct WorldBounds {
  Vec3 min;
  Vec3 max;

  bool contains(Vec3 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
};

struct World {
  WorldBounds bounds;
  std::optional<TerrainGrid> terrain;
  std::vector<Obstacle> obstacles;
  bool terrain_is_obstacle = true;  // 3D agents sense the surface as an obstacle
};

// One sensed obstacle, reduced to the quantities the steering laws consume.
// cone_ccw / cone_cw are the bearings of the two vision-cone boundary rays,
// measured in the frame noted on the producing call (planar sensing: world
// x-y bearings; 3D sensing: bearings in the avoidance plane, 0 = straight
// ahead). cone_ccw is the counter-clockwise-most boundary.
struct SensorReading {
  int obstacle_id = 0;       // -1 identifies the terrain surface
  double dist = 0.0;
  Vec3 nearest;
  Vec3 surface_velocity;
  double cone_ccw = 0.0;
  double cone_cw = 0.0;
  Vec3 tangent;  // avoidance-plane generator (world frame), unit length
};

// Planar sensing for 2D agents: bearings are absolute world x-y angles.
// Readings come back sorted by distance, nearest first; obstacles farther
// than sensor_range (or out of the agent's plane) are omitted.
std::vector<SensorReading> sense_planar(Vec2 p, double z, const World& world,
                                        double sensor_range);

// 3D sensing for orientation-vector agents. For each obstacle in range the
// avoidance plane spanned by the agent's orientation and the direction to the
// nearest surface point is built (with degeneracy fallbacks preferring a
// vertical plane), and the vision cone is measured inside that plane.
// `tangent` in the reading reconstructs the same plane via avoidance_plane().
// When world.terrain_is_obstacle and terrain is present, a terrain reading
// with obstacle_id == -1 is included, built from sampled surface points.
std::vector<SensorReading> sense_3d(Vec3 p, Vec3 orientation, const World& world,
                                    double sensor_range);

// Minimum clearance from p to every obstacle (and optionally the terrain
// surface for airborne agents). Used for safety accounting, not sensing.
double min_clearance(Vec3 p, const World& world, bool include_terrain);

}  // namespace firenav
