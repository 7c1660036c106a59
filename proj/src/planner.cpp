#include "firenav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace firenav {

// ---------------------------------------------------------------------------
// Collision checking
// ---------------------------------------------------------------------------

bool CollisionChecker::point_free(Vec3 p) const {
  if (!world_->bounds.contains(p)) return false;
  for (const Obstacle& ob : world_->obstacles) {
    if (distance_to(ob, p).dist <= clearance_) return false;
  }
  return true;
}

bool CollisionChecker::segment_free(Vec3 a, Vec3 b) const {
  const double len = distance(a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(len / spacing_)));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (!point_free(a + (b - a) * t)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// RRT-connect
// ---------------------------------------------------------------------------

namespace {

struct TreeNode {
  Vec3 p;
  int parent;
};

using Tree = std::vector<TreeNode>;

// Nearest node by Euclidean distance; ties go to the lowest index (strict <
// keeps the first minimum found, which is the lowest index in a linear scan).
int nearest_node(const Tree& tree, Vec3 q) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < tree.size(); ++i) {
    const double d = distance(tree[i].p, q);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

enum class ExtendResult { Trapped, Advanced, Reached };

ExtendResult extend(Tree& tree, Vec3 q, const RrtParams& params,
                    const CollisionChecker& check, int* new_index) {
  const int near = nearest_node(tree, q);
  const Vec3 from = tree[near].p;
  Vec3 to = q;
  bool reached = true;
  const double d = distance(from, q);
  if (d > params.step_size) {
    to = from + (q - from) * (params.step_size / d);
    reached = false;
  }
  if (!check.segment_free(from, to)) return ExtendResult::Trapped;
  tree.push_back({to, near});
  *new_index = static_cast<int>(tree.size()) - 1;
  return reached ? ExtendResult::Reached : ExtendResult::Advanced;
}

Path extract_branch(const Tree& tree, int leaf) {
  Path branch;
  for (int i = leaf; i >= 0; i = tree[i].parent) {
    branch.push_back(tree[i].p);
  }
  return branch;  // leaf first, root last
}

class Sampler {
 public:
  Sampler(const World& world, const RrtParams& params, Vec3 anchor_z, const Path* corridor)
      : bounds_(world.bounds), params_(params), z_(anchor_z.z), corridor_(corridor),
        rng_(params.seed) {
    if (corridor_ && corridor_->size() < 2) corridor_ = nullptr;
    if (corridor_) {
      seg_len_.reserve(corridor_->size() - 1);
      double acc = 0.0;
      for (size_t i = 0; i + 1 < corridor_->size(); ++i) {
        acc += distance((*corridor_)[i], (*corridor_)[i + 1]);
        seg_len_.push_back(acc);
      }
      if (acc <= 0.0) corridor_ = nullptr;
    }
  }

  // Draws the next sample; `other_root` is the opposite tree's root, used as
  // the biased "goal" sample.
  Vec3 next(Vec3 other_root) {
    const double r = uniform01();
    if (r < params_.goal_bias) return other_root;
    if (corridor_ && r < params_.goal_bias + params_.corridor_bias) return corridor_sample();
    return uniform_sample();
  }

 private:
  double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

  Vec3 uniform_sample() {
    Vec3 s;
    s.x = bounds_.min.x + uniform01() * (bounds_.max.x - bounds_.min.x);
    s.y = bounds_.min.y + uniform01() * (bounds_.max.y - bounds_.min.y);
    s.z = params_.planar ? z_
                         : bounds_.min.z + uniform01() * (bounds_.max.z - bounds_.min.z);
    return s;
  }

  Vec3 corridor_sample() {
    // Point along the reference path, uniform in arc length, plus a uniform
    // offset inside a ball of radius 3 * step_size.
    const double target = uniform01() * seg_len_.back();
    const auto it = std::lower_bound(seg_len_.begin(), seg_len_.end(), target);
    const size_t seg = static_cast<size_t>(it - seg_len_.begin());
    const double prev = seg == 0 ? 0.0 : seg_len_[seg - 1];
    const double within = seg_len_[seg] - prev;
    const double t = within > 0.0 ? (target - prev) / within : 0.0;
    const Vec3 base = (*corridor_)[seg] + ((*corridor_)[seg + 1] - (*corridor_)[seg]) * t;

    const double radius = 3.0 * params_.step_size;
    Vec3 offset;
    do {
      offset = {2.0 * uniform01() - 1.0, 2.0 * uniform01() - 1.0,
                params_.planar ? 0.0 : 2.0 * uniform01() - 1.0};
    } while (dot(offset, offset) > 1.0);
    Vec3 s = base + offset * radius;
    s.x = std::clamp(s.x, bounds_.min.x, bounds_.max.x);
    s.y = std::clamp(s.y, bounds_.min.y, bounds_.max.y);
    s.z = params_.planar ? z_ : std::clamp(s.z, bounds_.min.z, bounds_.max.z);
    return s;
  }

  WorldBounds bounds_;
  RrtParams params_;
  double z_;
  const Path* corridor_;
  std::vector<double> seg_len_;
  std::mt19937_64 rng_;
};

}  // namespace

Path plan_rrt_connect(const World& world, Vec3 start, Vec3 goal, const RrtParams& params,
                      const Path* corridor) {
  const CollisionChecker check(world, params.clearance, params.step_size / 4.0);
  if (!check.point_free(start)) throw StartOrGoalBlockedError("start position is not in free space");
  if (!check.point_free(goal)) throw StartOrGoalBlockedError("goal position is not in free space");

  if (check.segment_free(start, goal)) return {start, goal};

  Tree tree_a{{start, -1}};  // grows from the start
  Tree tree_b{{goal, -1}};   // grows from the goal
  bool a_is_start = true;
  Sampler sampler(world, params, start, corridor);

  for (int it = 0; it < params.max_iterations; ++it) {
    const Vec3 q = sampler.next(tree_b[0].p);
    int new_a = -1;
    if (extend(tree_a, q, params, check, &new_a) != ExtendResult::Trapped) {
      // Greedily connect the other tree toward the new node.
      const Vec3 target = tree_a[new_a].p;
      int new_b = -1;
      ExtendResult r;
      do {
        r = extend(tree_b, target, params, check, &new_b);
      } while (r == ExtendResult::Advanced);
      if (r == ExtendResult::Reached) {
        Path from_a = extract_branch(tree_a, new_a);   // meeting point .. root_a
        Path from_b = extract_branch(tree_b, new_b);   // meeting point .. root_b
        std::reverse(from_a.begin(), from_a.end());    // root_a .. meeting point
        // Skip the duplicated meeting point at the front of from_b.
        from_a.insert(from_a.end(), from_b.begin() + 1, from_b.end());
        if (!a_is_start) std::reverse(from_a.begin(), from_a.end());
        return from_a;
      }
    }
    std::swap(tree_a, tree_b);
    a_is_start = !a_is_start;
  }
  throw NoPathFoundError{};
}

// ---------------------------------------------------------------------------
// Path post-processing
// ---------------------------------------------------------------------------

Path prune_path(const Path& path, const CollisionChecker& check) {
  if (path.size() <= 2) return path;
  Path out;
  size_t j = path.size() - 1;
  out.push_back(path[j]);
  while (j > 0) {
    size_t next = j - 1;  // consecutive waypoints are always connectable
    for (size_t i = 0; i < j; ++i) {
      if (check.segment_free(path[i], path[j])) {
        next = i;
        break;
      }
    }
    j = next;
    out.push_back(path[j]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

double l1(Vec3 a, Vec3 b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

Vec3 clamp_to_box(Vec3 p, Vec3 a, Vec3 b) {
  return {std::clamp(p.x, std::min(a.x, b.x), std::max(a.x, b.x)),
          std::clamp(p.y, std::min(a.y, b.y), std::max(a.y, b.y)),
          std::clamp(p.z, std::min(a.z, b.z), std::max(a.z, b.z))};
}

}  // namespace

Path shortcut_l1(const Path& path, const CollisionChecker& check, int max_sweeps) {
  Path p = path;
  if (p.size() <= 2) return p;
  constexpr double kGain = 1e-12;

  bool changed = true;
  for (int sweep = 0; changed && sweep < max_sweeps; ++sweep) {
    changed = false;
    // Replacement: move each interior waypoint to the nearest point of the
    // axis-aligned box spanned by its neighbours. Inside that box the two
    // legs add up to the direct l1 distance, the best any interior point
    // can do.
    for (size_t i = 1; i + 1 < p.size(); ++i) {
      const Vec3 cand = clamp_to_box(p[i], p[i - 1], p[i + 1]);
      if (cand == p[i]) continue;
      const double before = l1(p[i - 1], p[i]) + l1(p[i], p[i + 1]);
      const double after = l1(p[i - 1], cand) + l1(cand, p[i + 1]);
      if (after < before - kGain && check.segment_free(p[i - 1], cand) &&
          check.segment_free(cand, p[i + 1])) {
        p[i] = cand;
        changed = true;
      }
    }
    // Removal of waypoints that no longer buy any length.
    for (size_t i = p.size() - 2; i >= 1 && p.size() > 2; --i) {
      const double before = l1(p[i - 1], p[i]) + l1(p[i], p[i + 1]);
      const double after = l1(p[i - 1], p[i + 1]);
      if (after < before - kGain && check.segment_free(p[i - 1], p[i + 1])) {
        p.erase(p.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      }
    }
  }
  return p;
}

namespace {

// De Boor evaluation of a clamped uniform B-spline of the given degree.
Vec3 de_boor(const Path& ctrl, const std::vector<double>& knots, int degree, double t) {
  // Find the knot span with knots[s] <= t < knots[s+1].
  const int n = static_cast<int>(ctrl.size());
  int s = degree;
  const int last = n - 1;
  while (s < last && t >= knots[static_cast<size_t>(s) + 1]) ++s;

  std::vector<Vec3> d(static_cast<size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j) {
    d[static_cast<size_t>(j)] = ctrl[static_cast<size_t>(j + s - degree)];
  }
  for (int r = 1; r <= degree; ++r) {
    for (int j = degree; j >= r; --j) {
      const double lo = knots[static_cast<size_t>(j + s - degree)];
      const double hi = knots[static_cast<size_t>(j + 1 + s - r)];
      const double a = hi > lo ? (t - lo) / (hi - lo) : 0.0;
      d[static_cast<size_t>(j)] =
          d[static_cast<size_t>(j - 1)] * (1.0 - a) + d[static_cast<size_t>(j)] * a;
    }
  }
  return d[static_cast<size_t>(degree)];
}

}  // namespace

Path smooth_spline(const Path& path, const CollisionChecker& check, int samples_per_span) {
  const int n = static_cast<int>(path.size());
  if (n < 3) return path;
  const int degree = std::min(3, n - 1);

  // Clamped uniform knot vector: degree+1 zeros, 1..spans-1, degree+1 at the end.
  const int spans = n - degree;
  std::vector<double> knots;
  knots.reserve(static_cast<size_t>(n + degree + 1));
  for (int i = 0; i <= degree; ++i) knots.push_back(0.0);
  for (int i = 1; i < spans; ++i) knots.push_back(static_cast<double>(i));
  for (int i = 0; i <= degree; ++i) knots.push_back(static_cast<double>(spans));

  Path smooth;
  const int total_samples = spans * samples_per_span;
  smooth.reserve(static_cast<size_t>(total_samples) + 1);
  smooth.push_back(path.front());  // endpoint preserved bit-identically
  for (int i = 1; i < total_samples; ++i) {
    const double t = static_cast<double>(spans) * i / total_samples;
    smooth.push_back(de_boor(path, knots, degree, t));
  }
  smooth.push_back(path.back());

  for (size_t i = 0; i + 1 < smooth.size(); ++i) {
    if (!check.segment_free(smooth[i], smooth[i + 1])) return path;
  }
  // Tolerance: a convex rounding keeps the same total turning as the corner
  // it replaces, and summing many small angles may land a hair above it.
  if (turn_angle_sum(smooth) > turn_angle_sum(path) + 1e-9) return path;
  return smooth;
}

// ---------------------------------------------------------------------------
// Path metrics
// ---------------------------------------------------------------------------

double path_length_l1(const Path& path) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) total += l1(path[i], path[i + 1]);
  return total;
}

double path_length_l2(const Path& path) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) total += distance(path[i], path[i + 1]);
  return total;
}

double turn_angle_sum(const Path& path) {
  double total = 0.0;
  for (size_t i = 1; i + 1 < path.size(); ++i) {
    const Vec3 u = path[i] - path[i - 1];
    const Vec3 v = path[i + 1] - path[i];
    const double nu = norm(u), nv = norm(v);
    if (nu < kDirectionEps || nv < kDirectionEps) continue;
    total += std::atan2(norm(cross(u, v)), dot(u, v));
  }
  return total;
}

double hazard_proximity(const Path& path, const std::vector<Vec3>& hazard_points) {
  constexpr double kDistanceFloor = 0.5;
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const double len = distance(path[i], path[i + 1]);
    if (len < kDirectionEps) continue;
    const Vec3 mid = (path[i] + path[i + 1]) * 0.5;
    double d = std::numeric_limits<double>::infinity();
    for (const Vec3& h : hazard_points) d = std::min(d, distance(mid, h));
    if (std::isinf(d)) continue;
    total += len / std::max(d, kDistanceFloor);
  }
  return total;
}

std::vector<double> total_cost(const std::vector<Path>& candidates, const CostWeights& w,
                               const std::vector<Vec3>* hazard_points) {
  if (w.gamma > 0.0 && hazard_points == nullptr) throw MissingHazardContextError{};

  const size_t n = candidates.size();
  std::vector<double> j1(n), j2(n), j3(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    j1[i] = path_length_l1(candidates[i]);
    j2[i] = turn_angle_sum(candidates[i]);
    if (w.gamma > 0.0) j3[i] = hazard_proximity(candidates[i], *hazard_points);
  }
  const auto normalized_term = [&](const std::vector<double>& v, size_t i) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double range = *hi - *lo;
    return range > 0.0 ? (v[i] - *lo) / range : 0.0;
  };
  std::vector<double> q(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    q[i] = w.alpha * normalized_term(j1, i) + w.beta * normalized_term(j2, i) +
           w.gamma * normalized_term(j3, i);
  }
  return q;
}

Path plan_pipeline(const World& world, Vec3 start, Vec3 goal, const RrtParams& params,
                   const Path* corridor) {
  const CollisionChecker check(world, params.clearance, params.step_size / 4.0);
  Path p = plan_rrt_connect(world, start, goal, params, corridor);
  p = prune_path(p, check);
  p = shortcut_l1(p, check);
  p = smooth_spline(p, check);
  return p;
}

}  // namespace firenav
