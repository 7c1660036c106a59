#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "firenav/world.hpp"

namespace firenav {

struct NoPathFoundError : std::runtime_error {
  NoPathFoundError() : std::runtime_error("sampling budget exhausted without connecting start and goal") {}
};

struct StartOrGoalBlockedError : std::runtime_error {
  explicit StartOrGoalBlockedError(const std::string& what) : std::runtime_error(what) {}
};

struct MissingHazardContextError : std::runtime_error {
  MissingHazardContextError()
      : std::runtime_error("hazard-weighted cost requested without hazard context") {}
};

using Path = std::vector<Vec3>;

struct RrtParams {
  double step_size = 1.0;
  int max_iterations = 5000;
  double goal_bias = 0.05;      // probability of sampling the opposite tree's root
  double corridor_bias = 0.0;   // probability of sampling near the reference corridor
  double clearance = 0.0;       // inflation margin for collision checks
  std::uint64_t seed = 1;
  bool planar = false;          // plan in the z = start.z plane
};

struct CostWeights {
  double alpha = 1.0;  // path length (l1)
  double beta = 0.0;   // smoothness (turn-angle sum)
  double gamma = 0.0;  // hazard proximity
};

// Collision oracle for planning: a point is free when it clears every obstacle
// by more than `clearance` and lies inside the world bounds. Segments are
// validated by sub-sampling at a spacing of at most step_size/4.
class CollisionChecker {
 public:
  CollisionChecker(const World& world, double clearance, double max_spacing)
      : world_(&world), clearance_(clearance), spacing_(max_spacing) {}

  bool point_free(Vec3 p) const;
  bool segment_free(Vec3 a, Vec3 b) const;
  double spacing() const { return spacing_; }

 private:
  const World* world_;
  double clearance_;
  double spacing_;
};

// RRT-connect between start and goal. Deterministic for a fixed (world, seed).
// The optional corridor biases sampling into a tube of radius 3*step_size
// around a previous reference path (used when replanning).
Path plan_rrt_connect(const World& world, Vec3 start, Vec3 goal, const RrtParams& params,
                      const Path* corridor = nullptr);

// Waypoint pruning: walking back from the path end, each kept waypoint is
// replaced by the earliest one with a collision-free straight connection.
// Endpoints always survive; the result is idempotent under re-pruning.
Path prune_path(const Path& path, const CollisionChecker& check);

// Length-shortening pass (l1 metric): interior waypoints are clamped into the
// axis-aligned box of their neighbours (the l1-optimal interior placement) and
// removed when redundant. Only collision-free, strictly shorter substitutions
// are accepted.
Path shortcut_l1(const Path& path, const CollisionChecker& check, int max_sweeps = 10);

// Clamped cubic B-spline smoothing. Endpoints are preserved bit-identically;
// if the smoothed polyline collides or has a larger turn-angle sum than the
// input, the input is returned unchanged.
Path smooth_spline(const Path& path, const CollisionChecker& check, int samples_per_span = 8);

double path_length_l1(const Path& path);
double path_length_l2(const Path& path);

// Sum of absolute turn angles between consecutive segments (radians).
double turn_angle_sum(const Path& path);

// Hazard proximity: sum over segments of length / max(distance-to-hazard, 0.5),
// with the distance evaluated at the segment midpoint.
double hazard_proximity(const Path& path, const std::vector<Vec3>& hazard_points);

// Weighted aggregate cost for a candidate set. Each term is min-max normalized
// across the candidates before weighting, so scores are comparable only within
// one call. Throws MissingHazardContextError when gamma > 0 and no hazard
// points are supplied.
std::vector<double> total_cost(const std::vector<Path>& candidates, const CostWeights& w,
                               const std::vector<Vec3>* hazard_points = nullptr);

// Full planning pipeline: RRT-connect, prune, l1 shortcut, spline smoothing.
Path plan_pipeline(const World& world, Vec3 start, Vec3 goal, const RrtParams& params,
                   const Path* corridor = nullptr);

}  // namespace firenav
