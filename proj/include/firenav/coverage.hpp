#pragma once

#include <cstdint>
#include <vector>

#include "firenav/geometry.hpp"

namespace firenav {

// Downward camera cone: the ground footprint is a disc of radius
// altitude * tan(half_angle) centred under the vehicle.
struct SensorFootprint {
  double altitude = 20.0;
  double half_angle = 0.5;  // radians

  double radius() const { return altitude * std::tan(half_angle); }
};

struct GroundRect {
  Vec2 min;
  Vec2 size;
};

// Boustrophedon sweep of the rectangle at the given altitude: lanes parallel
// to the x axis, spaced two footprint radii apart, the first and last lanes
// one radius in from the edges. A region narrower than one lane spacing gets
// a single centreline lane.
std::vector<Vec3> lawnmower_waypoints(const GroundRect& region, double footprint_radius,
                                      double altitude);

// ---------------------------------------------------------------------------
// Region partitioning: seeded k-means over ground cells.
// ---------------------------------------------------------------------------

struct KmeansResult {
  std::vector<int> assignment;     // cluster index per input point
  std::vector<Vec2> centroids;
  std::vector<double> wcss_trace;  // within-cluster sum of squares per iteration
};

// Deterministic k-means: k-means++ seeding from the given seed, then Lloyd
// iterations until centroid motion falls below 1e-6 or 100 iterations pass.
// Ties in assignment go to the lower cluster index; an emptied cluster is
// re-seeded with the point farthest from its centroid.
KmeansResult kmeans_partition(const std::vector<Vec2>& points, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Rescue routing
// ---------------------------------------------------------------------------

struct Victim {
  int id = 0;
  Vec3 pos;
};

// Victims ordered by urgency: ascending distance to the fire front, ties by
// id. With no fire present every distance is infinite and ids decide alone.
std::vector<Victim> prioritize_victims(std::vector<Victim> victims,
                                       const std::vector<Vec3>& fire_boundary);

// Waypoint list visiting the (already prioritized) victims, then the safe zone.
std::vector<Vec3> build_rescue_route(const std::vector<Victim>& prioritized, Vec3 safe_zone);

// ---------------------------------------------------------------------------
// Energy accounting
// ---------------------------------------------------------------------------

struct EnergyModel {
  double p_base = 1.0;   // W, keep-alive draw
  double p_speed = 0.0;  // W/(m/s)^2
  double p_climb = 0.0;  // W/(m/s) of climb rate, descent free
};

// Integrates (p_base + p_speed v^2 + p_climb max(dz/dt, 0)) dt over a sampled
// trajectory. `positions` are uniformly spaced samples dt apart.
double trajectory_energy(const std::vector<Vec3>& positions, double dt, const EnergyModel& m);

}  // namespace firenav
