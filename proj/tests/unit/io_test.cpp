#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "firenav/io.hpp"

using namespace firenav;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<TrajectorySample> two_samples() {
  TrajectorySample a;
  a.t = 0.0;
  a.pos = {0.1, 1.0 / 3.0, -2.25};
  a.heading = 0.78539816339744831;
  a.mode = Mode::Tracking;
  a.v = 4.0;
  a.u = -1.9999999999;
  a.min_clearance = std::numeric_limits<double>::infinity();
  TrajectorySample b = a;
  b.t = 0.05;
  b.pos.x = 123456.789;
  b.mode = Mode::Avoiding;
  b.min_clearance = 3.0000000001;
  return {a, b};
}

}  // namespace

TEST_CASE("nine significant digits survive a parse round trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 123456.789, 0.0, -0.0, 4.0,
                   3.0000000001, 1e12}) {
    const std::string text = format_float(v);
    CHECK(std::stod(text) == doctest::Approx(v).epsilon(1e-9));
    // Rewriting the parsed value reproduces the text byte for byte.
    CHECK(format_float(std::stod(text)) == text);
  }
  CHECK(format_float(0.1) == "0.1");
  CHECK(format_float(4.0) == "4");
}

TEST_CASE("trajectory files round-trip every field including infinities") {
  const fs::path p = temp_file("io_test_traj.csv");
  const auto samples = two_samples();
  write_trajectory_csv(p.string(), 7, samples);

  const std::string text = slurp(p);
  CHECK(text.rfind("t,agent,x,y,z,heading,mode,v,u,min_clearance\n", 0) == 0);

  const TrajectoryFile tf = read_trajectory_csv(p.string());
  CHECK(tf.agent_id == 7);
  REQUIRE(tf.samples.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    // Nine significant digits: lossy past 1e-9 relative, no further.
    CHECK(tf.samples[i].t == doctest::Approx(samples[i].t).epsilon(1e-9));
    CHECK(tf.samples[i].pos.x == doctest::Approx(samples[i].pos.x).epsilon(1e-9));
    CHECK(tf.samples[i].pos.y == doctest::Approx(samples[i].pos.y).epsilon(1e-9));
    CHECK(tf.samples[i].pos.z == doctest::Approx(samples[i].pos.z).epsilon(1e-9));
    CHECK(tf.samples[i].heading == doctest::Approx(samples[i].heading).epsilon(1e-9));
    CHECK(tf.samples[i].mode == samples[i].mode);
    CHECK(tf.samples[i].v == samples[i].v);  // short decimals survive exactly
    CHECK(tf.samples[i].u == doctest::Approx(samples[i].u).epsilon(1e-9));
    if (std::isfinite(samples[i].min_clearance)) {
      CHECK(tf.samples[i].min_clearance ==
            doctest::Approx(samples[i].min_clearance).epsilon(1e-9));
    }
  }
  CHECK(std::isinf(tf.samples[0].min_clearance));

  // Writing the parsed samples again reproduces the file byte for byte.
  const fs::path p2 = temp_file("io_test_traj2.csv");
  write_trajectory_csv(p2.string(), tf.agent_id, tf.samples);
  CHECK(slurp(p2) == text);
}

TEST_CASE("a wrong header or a missing file is a missing-data error") {
  const fs::path p = temp_file("io_test_bad.csv");
  {
    std::ofstream out(p);
    out << "time,stuff\n1,2\n";
  }
  CHECK_THROWS_AS(read_trajectory_csv(p.string()), MissingDataError);
  CHECK_THROWS_AS(read_trajectory_csv("/nonexistent/x.csv"), MissingDataError);
}

TEST_CASE("run records round-trip the world, fire fronts and planned paths") {
  RunRecord r;
  r.bounds = {{-1, -2, 0}, {31, 29, 11}};
  r.d_eps = 0.75;
  r.obstacles.push_back({0, Disc{{5, 6}, 1.5}, {0.1, 0, 0}});
  r.obstacles.push_back({1, RectObs{{10, 10}, {3, 4}}, {}});
  r.obstacles.push_back({2, SegmentObs{{0, 0}, {2, 8}}, {}});
  r.obstacles.push_back({3, SphereObs{{4, 4, 5}, 2.0}, {}});
  r.obstacles.push_back({4, CylinderObs{{20, 20}, 0.0, 6.0, 1.0}, {}});
  r.fire_snapshots = {{{1, 1, 0}, {2, 1, 0}}, {{1, 1, 0}, {2, 1, 0}, {3, 1, 0}}};
  r.fire_snapshot_times = {0.0, 5.0};
  r.planned_paths = {{{0, 0, 0}, {5, 5, 0}, {10, 5, 0}}};

  const fs::path p = temp_file("io_test_record.json");
  write_run_record(p.string(), r);
  const RunRecord q = read_run_record(p.string());

  CHECK(q.bounds.min.x == r.bounds.min.x);
  CHECK(q.bounds.max.z == r.bounds.max.z);
  CHECK(q.d_eps == r.d_eps);
  REQUIRE(q.obstacles.size() == 5);
  CHECK(std::get<Disc>(q.obstacles[0].shape).radius == 1.5);
  CHECK(q.obstacles[0].velocity.x == 0.1);
  CHECK(std::get<RectObs>(q.obstacles[1].shape).size.y == 4.0);
  CHECK(std::get<SegmentObs>(q.obstacles[2].shape).b.y == 8.0);
  CHECK(std::get<SphereObs>(q.obstacles[3].shape).center.z == 5.0);
  CHECK(std::get<CylinderObs>(q.obstacles[4].shape).height == 6.0);
  REQUIRE(q.fire_snapshots.size() == 2);
  CHECK(q.fire_snapshots[1].size() == 3);
  CHECK(q.fire_snapshot_times[1] == 5.0);
  REQUIRE(q.planned_paths.size() == 1);
  CHECK(q.planned_paths[0][2].x == 10.0);

  CHECK_THROWS_AS(read_run_record("/nonexistent/x.json"), MissingDataError);
}

TEST_CASE("plots are produced from recorded data and refuse empty input") {
  RunRecord r;
  r.bounds = {{0, 0, 0}, {20, 20, 5}};
  r.obstacles.push_back({0, Disc{{10, 10}, 2.0}, {}});
  r.planned_paths = {{{0, 0, 0}, {20, 20, 0}}};
  r.fire_snapshots = {{{5, 5, 0}}};
  r.fire_snapshot_times = {0.0};

  std::vector<TrajectoryFile> trajs(1);
  trajs[0].agent_id = 0;
  trajs[0].samples = two_samples();
  trajs[0].samples[0].pos = {1, 1, 0};
  trajs[0].samples[1].pos = {2, 2, 0};
  trajs[0].samples[1].min_clearance = 4.0;

  const fs::path top = temp_file("io_test_topdown.svg");
  const fs::path clr = temp_file("io_test_clearance.svg");
  write_topdown_svg(top.string(), r, trajs);
  write_clearance_svg(clr.string(), r, trajs);

  const std::string t = slurp(top);
  CHECK(t.rfind("<svg", 0) == 0);
  CHECK(t.find("</svg>") != std::string::npos);
  CHECK(t.find("<circle") != std::string::npos);    // obstacle and fire markers
  CHECK(t.find("<polyline") != std::string::npos);  // paths

  const std::string c = slurp(clr);
  CHECK(c.rfind("<svg", 0) == 0);
  CHECK(c.find("safety envelope") != std::string::npos);

  std::vector<TrajectoryFile> empty(1);
  CHECK_THROWS_AS(write_topdown_svg(top.string(), r, empty), MissingDataError);
  CHECK_THROWS_AS(write_clearance_svg(clr.string(), r, empty), MissingDataError);
}

TEST_CASE("batch summaries list headline stats then one row per seed pair") {
  BatchSummary b;
  b.mode_a = PlannerMode::Hybrid;
  b.mode_b = PlannerMode::Reactive;
  b.pairs = 2;
  b.both_ok = 1;
  b.a_wins = 1;
  b.win_rate = 0.5;
  b.median_length_gain = 0.125;
  b.median_time_gain = 0.0625;
  PairOutcome p0;
  p0.seed = 4;
  p0.a_ok = p0.b_ok = true;
  p0.a.path_length = 10;
  p0.b.path_length = 12;
  PairOutcome p1;
  p1.seed = 5;
  p1.a_ok = true;
  p1.b_error = "timed out";
  b.outcomes = {p0, p1};

  const std::string text = batch_summary_text(b);
  CHECK(text.find("mode_a: hybrid\n") != std::string::npos);
  CHECK(text.find("mode_b: reactive\n") != std::string::npos);
  CHECK(text.find("pairs: 2\n") != std::string::npos);
  CHECK(text.find("win_rate: 0.5\n") != std::string::npos);
  CHECK(text.find("median_length_gain: 0.125\n") != std::string::npos);
  CHECK(text.find("\n4,1,1,10,12,") != std::string::npos);
  CHECK(text.find("\n5,1,0,") != std::string::npos);
  CHECK(text.find("# seed 5 b: timed out\n") != std::string::npos);

  const fs::path p = temp_file("io_test_batch.txt");
  write_batch_summary(p.string(), b);
  CHECK(slurp(p) == text);
}
