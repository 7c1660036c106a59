#include "firenav/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace firenav {

std::vector<Vec3> lawnmower_waypoints(const GroundRect& region, double footprint_radius,
                                      double altitude) {
  if (footprint_radius <= 0.0 || region.size.x <= 0.0 || region.size.y <= 0.0) {
    throw std::invalid_argument("lawnmower needs a positive footprint and region");
  }
  const double r = footprint_radius;
  const double height = region.size.y;

  std::vector<double> lanes;
  if (height <= 2.0 * r) {
    lanes.push_back(region.min.y + height / 2.0);
  } else {
    const int n = static_cast<int>(std::ceil(height / (2.0 * r)));
    lanes.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      // Last lane pulled back so its footprint still ends at the far edge.
      lanes.push_back(std::min(region.min.y + r * (2.0 * i + 1.0), region.min.y + height - r));
    }
    lanes.erase(std::unique(lanes.begin(), lanes.end()), lanes.end());
  }

  const double x_near = region.min.x;
  const double x_far = region.min.x + region.size.x;
  std::vector<Vec3> wps;
  wps.reserve(lanes.size() * 2);
  for (size_t i = 0; i < lanes.size(); ++i) {
    const bool forward = i % 2 == 0;
    wps.push_back({forward ? x_near : x_far, lanes[i], altitude});
    wps.push_back({forward ? x_far : x_near, lanes[i], altitude});
  }
  return wps;
}

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

namespace {

double sq_dist(Vec2 a, Vec2 b) {
  const Vec2 d = a - b;
  return dot(d, d);
}

double wcss(const std::vector<Vec2>& pts, const std::vector<int>& assign,
            const std::vector<Vec2>& centroids) {
  double total = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) total += sq_dist(pts[i], centroids[assign[i]]);
  return total;
}

}  // namespace

KmeansResult kmeans_partition(const std::vector<Vec2>& points, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (points.size() < static_cast<size_t>(k)) {
    throw std::invalid_argument("k-means needs at least k points");
  }

  std::mt19937_64 rng(seed);
  const size_t n = points.size();

  // k-means++ seeding: first centre uniform, then proportional to squared
  // distance from the nearest chosen centre.
  std::vector<Vec2> centroids;
  centroids.reserve(static_cast<size_t>(k));
  centroids.push_back(points[std::uniform_int_distribution<size_t>(0, n - 1)(rng)]);
  std::vector<double> d2(n);
  while (centroids.size() < static_cast<size_t>(k)) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& c : centroids) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    size_t pick = 0;
    if (total > 0.0) {
      const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      pick = n - 1;
      for (size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    centroids.push_back(points[pick]);
  }

  KmeansResult res;
  res.assignment.assign(n, 0);
  constexpr int kMaxIter = 100;
  constexpr double kMotionEps = 1e-6;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    // Assignment step; ties to the lower cluster index.
    for (size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = sq_dist(points[i], centroids[static_cast<size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      res.assignment[i] = best;
    }

    // Update step.
    std::vector<Vec2> sums(static_cast<size_t>(k));
    std::vector<int> counts(static_cast<size_t>(k), 0);
    for (size_t i = 0; i < n; ++i) {
      sums[res.assignment[i]] += points[i];
      ++counts[res.assignment[i]];
    }
    double motion = 0.0;
    for (int c = 0; c < k; ++c) {
      Vec2 next = centroids[static_cast<size_t>(c)];
      if (counts[static_cast<size_t>(c)] > 0) {
        next = sums[static_cast<size_t>(c)] / counts[static_cast<size_t>(c)];
      } else {
        // Re-seed an emptied cluster with the globally worst-fitted point.
        size_t worst = 0;
        double worst_d = -1.0;
        for (size_t i = 0; i < n; ++i) {
          const double d = sq_dist(points[i], centroids[res.assignment[i]]);
          if (d > worst_d) {
            worst_d = d;
            worst = i;
          }
        }
        next = points[worst];
      }
      motion = std::max(motion, std::sqrt(sq_dist(next, centroids[static_cast<size_t>(c)])));
      centroids[static_cast<size_t>(c)] = next;
    }
    res.wcss_trace.push_back(wcss(points, res.assignment, centroids));
    if (motion < kMotionEps) break;
  }

  // Final assignment against the settled centroids.
  for (size_t i = 0; i < n; ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d = sq_dist(points[i], centroids[static_cast<size_t>(c)]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    res.assignment[i] = best;
  }
  res.centroids = centroids;
  return res;
}

// ---------------------------------------------------------------------------
// Rescue routing & energy
// ---------------------------------------------------------------------------

std::vector<Victim> prioritize_victims(std::vector<Victim> victims,
                                       const std::vector<Vec3>& fire_boundary) {
  std::vector<std::pair<double, size_t>> keyed(victims.size());
  for (size_t i = 0; i < victims.size(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec3& b : fire_boundary) d = std::min(d, distance(victims[i].pos, b));
    keyed[i] = {d, i};
  }
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return victims[a.second].id < victims[b.second].id;
  });
  std::vector<Victim> out;
  out.reserve(victims.size());
  for (const auto& [d, i] : keyed) out.push_back(victims[i]);
  return out;
}

std::vector<Vec3> build_rescue_route(const std::vector<Victim>& prioritized, Vec3 safe_zone) {
  std::vector<Vec3> route;
  route.reserve(prioritized.size() + 1);
  for (const Victim& v : prioritized) route.push_back(v.pos);
  route.push_back(safe_zone);
  return route;
}

double trajectory_energy(const std::vector<Vec3>& positions, double dt, const EnergyModel& m) {
  if (dt <= 0.0) throw std::invalid_argument("energy integration needs dt > 0");
  double total = 0.0;
  for (size_t i = 0; i + 1 < positions.size(); ++i) {
    const Vec3 d = positions[i + 1] - positions[i];
    const double v = norm(d) / dt;
    const double climb = std::max(d.z / dt, 0.0);
    total += (m.p_base + m.p_speed * v * v + m.p_climb * climb) * dt;
  }
  return total;
}

}  // namespace firenav
