#include "firenav/fire.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace firenav {

namespace {

struct NeighborOffset {
  int di, dj, dk;
  Vec3 dir;  // unit direction from the source cell toward this neighbour
};

const std::array<NeighborOffset, 26>& neighbor_offsets() {
  static const std::array<NeighborOffset, 26> offs = [] {
    std::array<NeighborOffset, 26> a{};
    int n = 0;
    for (int dk = -1; dk <= 1; ++dk) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0 && dk == 0) continue;
          const Vec3 v{static_cast<double>(di), static_cast<double>(dj),
                       static_cast<double>(dk)};
          a[n++] = {di, dj, dk, v / norm(v)};
        }
      }
    }
    return a;
  }();
  return offs;
}

}  // namespace

FireGrid make_fire_grid(int nx, int ny, int nz, double cell, Vec3 origin,
                        double t_trigger, double kappa, double rho) {
  if (nx < 1 || ny < 1 || nz < 1 || cell <= 0.0) {
    throw std::invalid_argument("fire grid dimensions must be positive");
  }
  FireGrid g;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.cell = cell;
  g.origin = origin;
  g.t_trigger = t_trigger;
  g.kappa = kappa;
  g.rho = rho;
  g.temp.assign(static_cast<size_t>(g.cell_count()), 0.0);
  return g;
}

void ignite(FireGrid& g, int i, int j, int k, double t0) {
  if (!g.in_grid(i, j, k)) throw std::out_of_range("ignition cell outside the fire grid");
  // Re-igniting never cools a cell that is already hotter.
  double& t = g.temp[g.index(i, j, k)];
  t = std::max(t, t0);
}

void step_fire(FireGrid& g, const WindField& wind, double dt) {
  const Vec3 w = wind.vector * wind.intensity_scale;
  const auto& offs = neighbor_offsets();

  // Heat only flows out of burning cells, so gathering per burning cell is
  // bitwise-identical to the dense double-buffered sweep but far cheaper on
  // mostly-cold grids.
  std::vector<int> burning;
  for (int idx = 0; idx < g.cell_count(); ++idx) {
    if (g.temp[idx] > g.t_trigger) burning.push_back(idx);
  }
  if (burning.empty()) return;

  std::vector<double> delta(g.temp.size(), 0.0);
  for (const int src : burning) {
    const int i = src % g.nx;
    const int j = (src / g.nx) % g.ny;
    const int k = src / (g.nx * g.ny);
    const double t_src = g.temp[src];
    for (const NeighborOffset& o : offs) {
      const int ni = i + o.di, nj = j + o.dj, nk = k + o.dk;
      if (!g.in_grid(ni, nj, nk)) continue;
      const double weight = dot(w, o.dir) + g.kappa;
      if (weight <= 0.0) continue;
      delta[g.index(ni, nj, nk)] += t_src * weight * g.rho;
    }
  }
  for (size_t idx = 0; idx < g.temp.size(); ++idx) {
    g.temp[idx] += delta[idx] * dt;
  }
}

FireBoundary burning_boundary(const FireGrid& g) {
  static const std::array<std::array<int, 3>, 6> faces = {{
      {{1, 0, 0}}, {{-1, 0, 0}}, {{0, 1, 0}}, {{0, -1, 0}}, {{0, 0, 1}}, {{0, 0, -1}},
  }};
  FireBoundary b;
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (!g.burning(g.index(i, j, k))) continue;
        Vec3 outward{};
        bool edge = false;
        for (const auto& f : faces) {
          const int ni = i + f[0], nj = j + f[1], nk = k + f[2];
          // Off-grid neighbours do not count: the boundary is the interface
          // between burning and unburnt cells inside the modelled domain.
          if (!g.in_grid(ni, nj, nk)) continue;
          if (g.burning(g.index(ni, nj, nk))) continue;
          edge = true;
          outward += Vec3{static_cast<double>(f[0]), static_cast<double>(f[1]),
                          static_cast<double>(f[2])};
        }
        if (!edge) continue;
        b.points.push_back(g.cell_center(i, j, k));
        const double n = norm(outward);
        b.normals.push_back(n > kDirectionEps ? outward / n : Vec3{0, 0, 1});
      }
    }
  }
  return b;
}

std::vector<Vec3> boundary_velocities(const FireBoundary& current,
                                      const std::vector<Vec3>& previous_points,
                                      double dt) {
  std::vector<Vec3> v(current.points.size());
  if (previous_points.empty() || dt <= 0.0) return v;
  for (size_t i = 0; i < current.points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& q : previous_points) {
      best = std::min(best, distance(current.points[i], q));
    }
    v[i] = current.normals[i] * (best / dt);
  }
  return v;
}

}  // namespace firenav
