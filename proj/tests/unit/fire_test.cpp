#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "firenav/fire.hpp"

using namespace firenav;

namespace {

// Extent of the burning set along a signed axis direction, in cells from the
// given center. Returns -1 when nothing burns on that ray's side.
int extent(const FireGrid& g, int ci, int cj, int di, int dj) {
  int best = -1;
  for (int k = 0; k < g.nz; ++k) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (!g.burning(g.index(i, j, k))) continue;
        const int px = (i - ci) * di, py = (j - cj) * dj;
        if (di != 0 && px >= 0 && j == cj) best = std::max(best, px);
        if (dj != 0 && py >= 0 && i == ci) best = std::max(best, py);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("cold grids do not change") {
  FireGrid g = make_fire_grid(5, 5, 1, 1.0, {}, 50.0, 0.05, 1.0);
  ignite(g, 2, 2, 0, 40.0);  // below trigger: hot spot but no fire
  const std::vector<double> before = g.temp;
  step_fire(g, {{1, 0, 0}, 1.0}, 0.1);
  CHECK(g.temp == before);
}

TEST_CASE("windless single-step neighbour increment matches the closed form") {
  // One burning cell at 100, trigger 50, kappa 0.05, rho 1, dt 0.1:
  // every one of the 26 neighbours must gain exactly 100 * 0.05 * 1 * 0.1 = 0.5.
  FireGrid g = make_fire_grid(3, 3, 3, 1.0, {}, 50.0, 0.05, 1.0);
  ignite(g, 1, 1, 1, 100.0);
  step_fire(g, {{0, 0, 0}, 1.0}, 0.1);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) {
        if (i == 1 && j == 1 && k == 1) {
          CHECK(g.temp[g.index(i, j, k)] == doctest::Approx(100.0));
        } else {
          CHECK(std::abs(g.temp[g.index(i, j, k)] - 0.5) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("wind-aligned increment and upwind clamping are exact") {
  FireGrid g = make_fire_grid(3, 3, 3, 1.0, {}, 50.0, 0.05, 1.0);
  ignite(g, 1, 1, 1, 100.0);
  step_fire(g, {{1, 0, 0}, 1.0}, 0.1);
  // Downwind face neighbour: 100 * (1*1 + 0.05) * 1 * 0.1 = 10.5.
  CHECK(std::abs(g.temp[g.index(2, 1, 1)] - 10.5) < 1e-12);
  // Upwind face neighbour: weight -1 + 0.05 < 0 clamps to zero transfer.
  CHECK(g.temp[g.index(0, 1, 1)] == 0.0);
  // Crosswind face neighbour sees only kappa.
  CHECK(std::abs(g.temp[g.index(1, 2, 1)] - 0.5) < 1e-12);
  // Downwind diagonal: dot([1,0,0], [1,1,0]/sqrt(2)) = 1/sqrt(2).
  const double diag = 100.0 * (1.0 / std::sqrt(2.0) + 0.05) * 1.0 * 0.1;
  CHECK(std::abs(g.temp[g.index(2, 2, 1)] - diag) < 1e-12);
}

TEST_CASE("temperatures never decrease") {
  FireGrid g = make_fire_grid(9, 9, 1, 1.0, {}, 50.0, 0.05, 1.0);
  ignite(g, 4, 4, 0, 120.0);
  std::vector<double> prev = g.temp;
  for (int s = 0; s < 30; ++s) {
    step_fire(g, {{2, -1, 0}, 1.0}, 0.1);
    for (size_t i = 0; i < g.temp.size(); ++i) CHECK(g.temp[i] >= prev[i]);
    prev = g.temp;
  }
}

TEST_CASE("windless spread from a center ignition stays isotropic") {
  FireGrid g = make_fire_grid(41, 41, 1, 1.0, {}, 50.0, 0.05, 1.0);
  ignite(g, 20, 20, 0, 200.0);
  for (int s = 0; s < 200; ++s) step_fire(g, {{0, 0, 0}, 1.0}, 0.1);
  const int px = extent(g, 20, 20, 1, 0);
  CHECK(px >= 2);  // the front must actually have moved
  const int mx = extent(g, 20, 20, -1, 0);
  const int py = extent(g, 20, 20, 0, 1);
  const int my = extent(g, 20, 20, 0, -1);
  CHECK(px >= 0);
  const int lo = std::min(std::min(px, mx), std::min(py, my));
  const int hi = std::max(std::max(px, mx), std::max(py, my));
  CHECK(hi - lo <= 1);
}

TEST_CASE("downwind extent dominates upwind extent at every step") {
  FireGrid g = make_fire_grid(61, 31, 1, 1.0, {}, 50.0, 0.05, 1.0);
  ignite(g, 30, 15, 0, 200.0);
  bool ever_wider = false;
  for (int s = 0; s < 60; ++s) {
    step_fire(g, {{1, 0, 0}, 1.0}, 0.1);
    const int down = extent(g, 30, 15, 1, 0);
    const int up = extent(g, 30, 15, -1, 0);
    if (s >= 1) CHECK(down >= up);
    if (down > up) ever_wider = true;
  }
  CHECK(ever_wider);
}

TEST_CASE("igniting is bounds-checked and never cools") {
  FireGrid g = make_fire_grid(4, 4, 2, 1.0, {}, 50.0, 0.05, 1.0);
  CHECK_THROWS_AS(ignite(g, 4, 0, 0, 100.0), std::out_of_range);
  CHECK_THROWS_AS(ignite(g, 0, -1, 0, 100.0), std::out_of_range);
  CHECK_THROWS_AS(ignite(g, 0, 0, 2, 100.0), std::out_of_range);
  ignite(g, 1, 1, 1, 100.0);
  ignite(g, 1, 1, 1, 80.0);
  CHECK(g.temp[g.index(1, 1, 1)] == 100.0);
  int above = 0;
  for (int idx = 0; idx < g.cell_count(); ++idx)
    if (g.burning(idx)) ++above;
  CHECK(above == 1);
}

TEST_CASE("boundary of a 3x3 burning block is its 8-cell perimeter") {
  FireGrid g = make_fire_grid(7, 7, 1, 2.0, {1, 1, 0}, 50.0, 0.05, 1.0);
  for (int j = 2; j <= 4; ++j)
    for (int i = 2; i <= 4; ++i) ignite(g, i, j, 0, 100.0);

  const FireBoundary b = burning_boundary(g);
  CHECK(b.points.size() == 8);
  // The interior cell (3,3) must be absent.
  const Vec3 interior = g.cell_center(3, 3, 0);
  for (const Vec3& p : b.points) CHECK(norm(p - interior) > 1e-9);
  // Corner cell (2,2): outward = mean of -x and -y directions.
  bool found_corner = false;
  for (size_t i = 0; i < b.points.size(); ++i) {
    if (norm(b.points[i] - g.cell_center(2, 2, 0)) < 1e-9) {
      found_corner = true;
      const Vec3 expect = normalized(Vec3{-1, -1, 0});
      CHECK(norm(b.normals[i] - expect) < 1e-12);
    }
  }
  CHECK(found_corner);
}

TEST_CASE("boundary edge cases") {
  FireGrid g = make_fire_grid(5, 5, 1, 1.0, {}, 50.0, 0.05, 1.0);
  CHECK(burning_boundary(g).points.empty());
  ignite(g, 2, 2, 0, 100.0);
  const FireBoundary b = burning_boundary(g);
  REQUIRE(b.points.size() == 1);
  CHECK(norm(b.points[0] - g.cell_center(2, 2, 0)) < 1e-12);
}

TEST_CASE("boundary velocities measure front displacement along the normal") {
  FireBoundary cur;
  cur.points = {{3, 0, 0}, {0, 5, 0}};
  cur.normals = {{1, 0, 0}, {0, 1, 0}};
  const std::vector<Vec3> prev = {{1, 0, 0}, {0, 4, 0}};
  const auto v = boundary_velocities(cur, prev, 0.5);
  REQUIRE(v.size() == 2);
  CHECK(norm(v[0] - Vec3{4, 0, 0}) < 1e-12);  // moved 2 in 0.5 s
  CHECK(norm(v[1] - Vec3{0, 2, 0}) < 1e-12);  // moved 1 in 0.5 s

  const auto zero = boundary_velocities(cur, {}, 0.5);
  CHECK(norm(zero[0]) == 0.0);
  CHECK(norm(zero[1]) == 0.0);
}
