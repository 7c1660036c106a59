#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "firenav/reactive.hpp"

using namespace firenav;

namespace {

const VehicleLimits kLim{4.0, 2.0};
const ReactiveConfig kCfg{};

}  // namespace

TEST_CASE("tracking drives at full speed with bang-bang steering") {
  // Aligned within tolerance: straight ahead.
  TrackCommand2D cmd = track_target({0, 0}, 0.0, {10, 0}, kCfg, kLim);
  CHECK(cmd.v == kLim.v_max);
  CHECK(cmd.u == 0.0);
  CHECK(cmd.theta_fix == doctest::Approx(0.0));

  // Target 0.3 rad to the left: hard left.
  cmd = track_target({0, 0}, 0.0, {std::cos(0.3), std::sin(0.3)}, kCfg, kLim);
  CHECK(cmd.v == kLim.v_max);
  CHECK(cmd.u == kLim.u_max);
  CHECK(cmd.theta_fix == doctest::Approx(0.3));

  // 0.3 rad to the right: hard right.
  cmd = track_target({0, 0}, 0.0, {std::cos(-0.3), std::sin(-0.3)}, kCfg, kLim);
  CHECK(cmd.u == -kLim.u_max);
  CHECK(cmd.theta_fix == doctest::Approx(-0.3));

  // Inside the dead zone: no correction.
  cmd = track_target({0, 0}, 0.005, {10, 0}, kCfg, kLim);
  CHECK(cmd.u == 0.0);
}

TEST_CASE("3d tracking turns in the plane containing the target direction") {
  const Vec3 a{1, 0, 0};
  TrackCommand3D cmd = track_target_3d({0, 0, 0}, a, {5, 0, 3}, kCfg, kLim);
  CHECK(cmd.v == kLim.v_max);
  CHECK(std::abs(dot(cmd.u, a)) < 1e-12);            // turn is transverse
  CHECK(norm(cmd.u) == doctest::Approx(kLim.u_max)); // at the full rate
  CHECK(cmd.u.z > 0.0);                              // toward the raised target
  CHECK(cmd.theta_fix == doctest::Approx(std::atan2(3.0, 5.0)));

  // Aligned: no turn.
  cmd = track_target_3d({0, 0, 0}, a, {9, 0, 0}, kCfg, kLim);
  CHECK(norm(cmd.u) == 0.0);

  // Antipodal target: the fallback axis is horizontal-left, never NaN.
  cmd = track_target_3d({0, 0, 0}, a, {-9, 0, 0}, kCfg, kLim);
  CHECK(norm(cmd.u) == doctest::Approx(kLim.u_max));
  CHECK(std::abs(dot(cmd.u, a)) < 1e-12);
  CHECK(cmd.theta_fix == doctest::Approx(kPi));
}

TEST_CASE("avoiding a stationary obstacle keeps full speed") {
  PlanarAvoidanceInput in;
  in.cone_ccw = 0.4;
  in.cone_cw = -0.2;
  in.v_obstacle = {0, 0};
  in.robot_dir = {1, 0};
  const PlanarAvoidance out = avoid_planar(in, kCfg, kLim);
  // Zero obstacle velocity: the combined velocity has magnitude V_max exactly.
  CHECK(out.speed == doctest::Approx(kLim.v_max));
  CHECK(norm(out.v_gamma) == doctest::Approx(kLim.v_max));
  CHECK(std::abs(out.turn_rate) == kLim.u_max);
}

TEST_CASE("the enlarged boundary angles sit alpha_safe outside the cone") {
  PlanarAvoidanceInput in;
  in.cone_ccw = 0.5;
  in.cone_cw = -0.3;
  in.v_obstacle = {0.5, -0.2};
  in.robot_dir = {1, 0};

  const PlanarAvoidance ccw = avoid_planar(in, kCfg, kLim, 1);
  CHECK(ccw.side == 1);
  CHECK(ccw.beta == doctest::Approx(0.5 + kCfg.alpha_safe));
  const PlanarAvoidance cw = avoid_planar(in, kCfg, kLim, 2);
  CHECK(cw.side == 2);
  CHECK(cw.beta == doctest::Approx(-0.3 - kCfg.alpha_safe));

  // The occlusion velocity lies along the enlarged boundary with the speed margin.
  const double margin = kLim.v_max - norm(in.v_obstacle);
  CHECK(norm(ccw.occlusion) == doctest::Approx(margin));
  CHECK(std::atan2(ccw.occlusion.y, ccw.occlusion.x) == doctest::Approx(ccw.beta));
  CHECK(norm(ccw.v_gamma - (in.v_obstacle + ccw.occlusion)) < 1e-12);
}

TEST_CASE("an obstacle at or above top speed admits no avoidance") {
  PlanarAvoidanceInput in;
  in.cone_ccw = 0.4;
  in.cone_cw = -0.4;
  in.robot_dir = {1, 0};
  in.v_obstacle = {4.0, 0.0};  // exactly V_max
  CHECK_THROWS_AS(avoid_planar(in, kCfg, kLim), ObstacleTooFastError);
  in.v_obstacle = {3.0, 3.5};  // above V_max
  CHECK_THROWS_AS(avoid_planar(in, kCfg, kLim), ObstacleTooFastError);
}

TEST_CASE("the chosen side minimizes the heading deviation") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> width(0.05, 1.2);
  std::uniform_real_distribution<double> speed(0.0, 3.0);

  for (int trial = 0; trial < 10000; ++trial) {
    PlanarAvoidanceInput in;
    const double mid = angle(rng);
    in.cone_ccw = mid + width(rng);
    in.cone_cw = mid - width(rng);
    const double sv = speed(rng), sa = angle(rng);
    in.v_obstacle = {sv * std::cos(sa), sv * std::sin(sa)};
    const double ra = angle(rng);
    in.robot_dir = {std::cos(ra), std::sin(ra)};

    const PlanarAvoidance out = avoid_planar(in, kCfg, kLim);

    // Recompute both candidates independently.
    const double margin = kLim.v_max - sv;
    const double betas[2] = {in.cone_ccw + kCfg.alpha_safe, in.cone_cw - kCfg.alpha_safe};
    double dev[2];
    for (int s = 0; s < 2; ++s) {
      const Vec2 vg = in.v_obstacle + Vec2{std::cos(betas[s]), std::sin(betas[s])} * margin;
      dev[s] = norm(vg) < 1e-12 ? kPi : std::abs(signed_angle(vg, in.robot_dir));
    }
    const int picked = out.side - 1;
    CHECK(dev[picked] <= dev[1 - picked] + 1e-15);
    CHECK(out.speed <= kLim.v_max + 1e-12);
    CHECK(out.speed >= 0.0);
    CHECK(std::abs(out.turn_rate) <= kLim.u_max);
  }
}

TEST_CASE("exactly symmetric geometry falls to the configured tie-break") {
  PlanarAvoidanceInput in;
  in.cone_ccw = 0.4;
  in.cone_cw = -0.4;
  in.v_obstacle = {0, 0};
  in.robot_dir = {1, 0};

  ReactiveConfig cfg = kCfg;
  cfg.side_tiebreak = 1;
  CHECK(avoid_planar(in, cfg, kLim).side == 1);
  cfg.side_tiebreak = 2;
  CHECK(avoid_planar(in, cfg, kLim).side == 2);
}

TEST_CASE("a committed side overrides the argmin") {
  PlanarAvoidanceInput in;
  in.cone_ccw = 1.0;
  in.cone_cw = -0.1;  // argmin would clearly pick the clockwise side
  in.v_obstacle = {0, 0};
  in.robot_dir = {1, 0};
  CHECK(avoid_planar(in, kCfg, kLim).side == 2);
  CHECK(avoid_planar(in, kCfg, kLim, 1).side == 1);
}

TEST_CASE("planar wrapper turns the core into a unicycle command") {
  UnicycleState s;
  s.p = {0, 0};
  s.theta = 0.0;
  SensorReading r;
  r.cone_ccw = 0.3;
  r.cone_cw = -0.5;
  r.surface_velocity = {0.4, 0.1, 0};
  const Avoidance2D out = avoid_2d(s, r, kCfg, kLim);
  CHECK(out.v <= kLim.v_max + 1e-12);
  CHECK(std::abs(out.u) == kLim.u_max);  // v_gamma never aligns exactly here
  // The command turns toward the combined velocity: u and the bearing of
  // v_gamma relative to the heading share their sign.
  const double bearing = signed_angle(Vec2{1, 0}, out.v_gamma);
  CHECK(out.u * bearing > 0.0);
}

TEST_CASE("coplanar 3d avoidance reduces to the planar law") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> dist(2.0, 6.0);
  std::uniform_real_distribution<double> radius(0.3, 1.5);
  std::uniform_real_distribution<double> speed(0.0, 3.0);
  const double h = 5.0;  // common flight plane

  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double theta = angle(rng);
    const double ob_bearing = angle(rng);
    const double d = dist(rng);
    const double r = radius(rng);
    const double sv = speed(rng), sa = angle(rng);
    const Vec2 p2{0, 0};
    const Vec2 center{p2.x + d * std::cos(ob_bearing), p2.y + d * std::sin(ob_bearing)};

    World w2;
    w2.bounds = {{-100, -100, -100}, {100, 100, 100}};
    w2.terrain_is_obstacle = false;
    w2.obstacles.push_back({0, Disc{center, r}, {sv * std::cos(sa), sv * std::sin(sa), 0}});

    World w3 = w2;
    w3.obstacles[0].shape = SphereObs{{center.x, center.y, h}, r};

    const auto read2 = sense_planar(p2, 0.0, w2, 10.0);
    const auto read3 = sense_3d({p2.x, p2.y, h}, {std::cos(theta), std::sin(theta), 0}, w3, 10.0);
    if (read2.empty() || read3.empty()) continue;

    UnicycleState s2;
    s2.p = p2;
    s2.theta = theta;
    Body3DState s3;
    s3.e = {p2.x, p2.y, h};
    s3.a = {std::cos(theta), std::sin(theta), 0};

    const Avoidance2D a2 = avoid_2d(s2, read2[0], kCfg, kLim);
    const Avoidance3D a3 = avoid_3d(s3, read3[0], kCfg, kLim);
    ++compared;

    CHECK(std::abs(a3.v - a2.v) < 1e-9);
    // In-plane turn rate about +z must match the unicycle turn rate.
    const double omega = cross(s3.a, a3.u).z;
    CHECK(std::abs(omega - a2.u) < 1e-9);
    // The 3d turn command never has a component along the orientation.
    CHECK(std::abs(dot(a3.u, s3.a)) < 1e-12);
  }
  CHECK(compared > 900);  // nearly all fixtures must actually be sensed
}

TEST_CASE("a reading that spans no plane propagates the degeneracy") {
  Body3DState s;
  s.e = {0, 0, 0};
  s.a = {1, 0, 0};
  SensorReading r;
  r.tangent = {1, 0, 0};      // collinear with the orientation
  r.nearest = {3, 0, 0};      // and so is the fallback hint
  r.cone_ccw = 0.2;
  r.cone_cw = -0.2;
  CHECK_THROWS_AS(avoid_3d(s, r, kCfg, kLim), DegeneratePlaneError);
}
