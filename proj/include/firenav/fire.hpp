#pragma once

#include <cstdint>
#include <vector>

#include "firenav/geometry.hpp"

namespace firenav {

struct WindField {
  Vec3 vector;                  // wind velocity (m/s)
  double intensity_scale = 1.0; // multiplies the wind vector in the transfer weight
};

// Cellular fire-spread grid. Each cell holds a temperature; cells above
// t_trigger burn and radiate heat into their 26 neighbours (truncated at the
// grid boundary), weighted by wind alignment:
//   dT_i/dt = sum_j  T_j * max(wind . dir(j->i) + kappa, 0) * rho
// over burning neighbours j. Steps are double-buffered: all transfers in one
// step read the temperatures from the start of that step.
struct FireGrid {
  int nx = 0, ny = 0, nz = 1;
  double cell = 1.0;   // cell edge length (m)
  Vec3 origin;         // world position of the (0,0,0) cell corner
  double t_trigger = 50.0;
  double kappa = 0.05;
  double rho = 1.0;
  std::vector<double> temp;  // nx * ny * nz, x-fastest

  int cell_count() const { return nx * ny * nz; }
  bool in_grid(int i, int j, int k) const {
    return i >= 0 && i < nx && j >= 0 && j < ny && k >= 0 && k < nz;
  }
  int index(int i, int j, int k) const { return (k * ny + j) * nx + i; }
  Vec3 cell_center(int i, int j, int k) const {
    return origin + Vec3{(i + 0.5) * cell, (j + 0.5) * cell, (k + 0.5) * cell};
  }
  bool burning(int idx) const { return temp[idx] > t_trigger; }
};

FireGrid make_fire_grid(int nx, int ny, int nz, double cell, Vec3 origin,
                        double t_trigger, double kappa, double rho);

// Sets the cell's temperature (ignition injects t0 directly).
void ignite(FireGrid& g, int i, int j, int k, double t0);

// One explicit-Euler spread step of length dt.
void step_fire(FireGrid& g, const WindField& wind, double dt);

// Burning cells with at least one in-grid, non-burning face neighbour.
// `normals` are the outward directions (mean of the directions toward those
// non-burning face neighbours, normalized).
struct FireBoundary {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
};

FireBoundary burning_boundary(const FireGrid& g);

// Front speed estimate: for each current boundary point, displacement from
// the previous boundary (nearest-point distance) per unit time, directed along
// the outward normal. Empty previous boundary gives zero velocities.
std::vector<Vec3> boundary_velocities(const FireBoundary& current,
                                      const std::vector<Vec3>& previous_points,
                                      double dt);

}  // namespace firenav
