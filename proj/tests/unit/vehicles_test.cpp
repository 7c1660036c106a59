#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "firenav/vehicles.hpp"

using namespace firenav;

TEST_CASE("unicycle straight step") {
  const UnicycleState s{{0, 0}, 0.0};
  const UnicycleState n = step_unicycle(s, 1.0, 0.0, {3, 3}, 0.1);
  CHECK(n.p.x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(n.p.y == doctest::Approx(0.0));
  CHECK(n.theta == doctest::Approx(0.0));
}

TEST_CASE("unicycle turning step uses the pre-step heading for translation") {
  const UnicycleState s{{0, 0}, kPi / 2};
  const UnicycleState n = step_unicycle(s, 2.0, 1.0, {4, 2}, 0.05);
  CHECK(n.p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(n.p.y == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(n.theta == doctest::Approx(kPi / 2 + 0.05));
}

TEST_CASE("unicycle rejects out-of-range commands instead of clamping") {
  const UnicycleState s{{0, 0}, 0.0};
  const VehicleLimits lim{4, 2};
  CHECK_THROWS_AS(step_unicycle(s, 4.1, 0.0, lim, 0.1), LimitViolationError);
  CHECK_THROWS_AS(step_unicycle(s, -0.5, 0.0, lim, 0.1), LimitViolationError);
  CHECK_THROWS_AS(step_unicycle(s, 1.0, 2.5, lim, 0.1), LimitViolationError);
  CHECK_THROWS_AS(step_unicycle(s, 1.0, -2.5, lim, 0.1), LimitViolationError);
  CHECK_NOTHROW(step_unicycle(s, 4.0, 2.0, lim, 0.1));
  CHECK_NOTHROW(step_unicycle(s, 0.0, -2.0, lim, 0.1));
}

TEST_CASE("minimum turning radius is the exact speed ratio") {
  const VehicleLimits lim{4.0, 2.0};
  CHECK(lim.r_min() == 2.0);
}

TEST_CASE("full-rate unicycle circles converge to the minimum turning radius") {
  // Integrate a full turn at v_max, u_max; the traced circle's radius tends
  // to v_max/u_max as dt -> 0 (explicit Euler overshoots by O(dt)).
  const VehicleLimits lim{4.0, 2.0};
  double prev_err = 1e9;
  for (const double dt : {0.02, 0.01, 0.005, 0.0025}) {
    UnicycleState s{{0, 0}, 0.0};
    Vec2 min_p{1e18, 1e18}, max_p{-1e18, -1e18};
    const int steps = static_cast<int>(std::round(2.0 * kPi / (lim.u_max * dt)));
    for (int i = 0; i < steps; ++i) {
      s = step_unicycle(s, lim.v_max, lim.u_max, lim, dt);
      min_p = {std::min(min_p.x, s.p.x), std::min(min_p.y, s.p.y)};
      max_p = {std::max(max_p.x, s.p.x), std::max(max_p.y, s.p.y)};
    }
    const double radius = 0.25 * ((max_p.x - min_p.x) + (max_p.y - min_p.y));
    const double err = std::abs(radius - lim.r_min());
    CHECK(err < prev_err + 1e-12);  // error shrinks with dt
    prev_err = err;
  }
  CHECK(prev_err < 0.01);
}

TEST_CASE("orientation-vector step matches the hand-computed example") {
  Body3DState s;
  s.e = {0, 0, 0};
  s.a = {1, 0, 0};
  const Body3DState n = step_body3d(s, 1.0, {0, 0.1, 0}, {2, 1}, 0.1);
  CHECK(norm(n.e - Vec3{0.1, 0, 0}) < 1e-12);
  const Vec3 expect = normalized(Vec3{1.0, 0.01, 0.0});
  CHECK(norm(n.a - expect) < 1e-12);
}

TEST_CASE("orientation vector stays unit over long random steering") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const VehicleLimits lim{4.0, 4.0};
  Body3DState s;
  s.a = normalized(Vec3{0.3, -0.5, 0.8});
  for (int i = 0; i < 100000; ++i) {
    const Vec3 cmd{u(rng), u(rng), u(rng)};
    s = step_body3d(s, 2.0, cmd, lim, 0.01);
    // invariant is enforced every step, not just at the end
    if (i % 1000 == 0) CHECK(std::abs(norm(s.a) - 1.0) < 1e-9);
  }
  CHECK(std::abs(norm(s.a) - 1.0) < 1e-9);
}

TEST_CASE("turn command components along the orientation are ignored by projection") {
  Body3DState s;
  s.a = {0, 1, 0};
  const Body3DState with_axial = step_body3d(s, 1.0, {0.3, 0.7, 0}, {2, 1}, 0.05);
  const Body3DState only_perp = step_body3d(s, 1.0, {0.3, 0.0, 0}, {2, 1}, 0.05);
  CHECK(norm(with_axial.a - only_perp.a) < 1e-12);
}

TEST_CASE("heading-angle model matches its rate equations for a small step") {
  HeadingState s;
  s.p = {1, 2, 3};
  s.alpha = 0.3;
  s.beta = -1.1;
  const double v = 2.5, dt = 1e-3;
  const HeadingState n = step_heading(s, v, 0.2, -0.4, {3, 1}, dt);
  CHECK(n.p.x - s.p.x == doctest::Approx(v * std::cos(s.beta) * std::cos(s.alpha) * dt).epsilon(1e-12));
  CHECK(n.p.y - s.p.y == doctest::Approx(v * std::sin(s.beta) * std::cos(s.alpha) * dt).epsilon(1e-12));
  CHECK(n.p.z - s.p.z == doctest::Approx(v * std::sin(s.alpha) * dt).epsilon(1e-12));
  CHECK(n.alpha == doctest::Approx(s.alpha + 0.2 * dt));
  CHECK(n.beta == doctest::Approx(s.beta - 0.4 * dt));
}

TEST_CASE("heading-angle pitch saturates at vertical") {
  HeadingState s;
  s.alpha = kPi / 2 - 0.001;
  const HeadingState n = step_heading(s, 1.0, 1.0, 0.0, {3, 1}, 0.1);
  CHECK(n.alpha == doctest::Approx(kPi / 2));
}

TEST_CASE("ground vehicle height follows the surface") {
  const auto bowl = [](double x, double y) { return 0.1 * (x * x + y * y); };
  UgvState s;
  s.p = {1, 0};
  s.z = bowl(1, 0);
  const UgvState n = step_ugv(s, 1.0, 0.0, {3, 3}, bowl, 0.5);
  CHECK(n.p.x == doctest::Approx(1.5));
  CHECK(n.z == doctest::Approx(bowl(1.5, 0.0)));
}
