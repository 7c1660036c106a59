#include "firenav/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace firenav {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

constexpr const char* kCsvHeader = "t,agent,x,y,z,heading,mode,v,u,min_clearance";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MissingDataError("cannot write " + path);
  return out;
}

const char* mode_name(Mode m) { return m == Mode::Avoiding ? "avoiding" : "tracking"; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, int agent_id,
                          const std::vector<TrajectorySample>& samples) {
  std::ofstream out = open_out(path);
  out << kCsvHeader << "\n";
  for (const TrajectorySample& s : samples) {
    out << format_float(s.t) << ',' << agent_id << ',' << format_float(s.pos.x) << ','
        << format_float(s.pos.y) << ',' << format_float(s.pos.z) << ','
        << format_float(s.heading) << ',' << mode_name(s.mode) << ','
        << format_float(s.v) << ',' << format_float(s.u) << ','
        << format_float(s.min_clearance) << "\n";
  }
}

TrajectoryFile read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingDataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw MissingDataError(path + ": not a trajectory file (bad header)");
  }
  TrajectoryFile tf;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 10) throw MissingDataError(path + ": malformed row '" + line + "'");
    TrajectorySample s;
    s.t = std::stod(f[0]);
    tf.agent_id = std::stoi(f[1]);
    s.pos = {std::stod(f[2]), std::stod(f[3]), std::stod(f[4])};
    s.heading = std::stod(f[5]);
    s.mode = f[6] == "avoiding" ? Mode::Avoiding : Mode::Tracking;
    s.v = std::stod(f[7]);
    s.u = std::stod(f[8]);
    s.min_clearance = std::stod(f[9]);
    tf.samples.push_back(s);
  }
  return tf;
}

void write_metrics(const std::string& path, const SimResult& result) {
  std::ofstream out = open_out(path);
  out << "status: " << to_string(result.status) << "\n";
  if (!result.message.empty()) out << "message: " << result.message << "\n";
  out << "mission_time: " << format_float(result.metrics.mission_time) << "\n";
  out << "path_length: " << format_float(result.metrics.path_length) << "\n";
  out << "min_clearance: " << format_float(result.metrics.min_clearance) << "\n";
  out << "turn_effort: " << format_float(result.metrics.turn_effort) << "\n";
  out << "replans: " << result.metrics.replans << "\n";
  if (result.metrics.energy) out << "energy: " << format_float(*result.metrics.energy) << "\n";
  for (const AgentMetrics& m : result.agent_metrics) {
    out << "agent " << m.agent_id << ":\n";
    out << "  path_length: " << format_float(m.path_length) << "\n";
    out << "  completion_time: " << format_float(m.completion_time) << "\n";
    out << "  min_clearance: " << format_float(m.min_clearance) << "\n";
    out << "  turn_effort: " << format_float(m.turn_effort) << "\n";
    out << "  replans: " << m.replans << "\n";
    out << "  reached: " << (m.reached ? "true" : "false") << "\n";
  }
}

// ---------------------------------------------------------------------------
// Run record
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json vec3_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }
json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec3 vec3_from(const json& j) { return {j.at(0), j.at(1), j.at(2)}; }
Vec2 vec2_from(const json& j) { return {j.at(0), j.at(1)}; }

json obstacle_json(const Obstacle& ob) {
  json j;
  j["id"] = ob.id;
  j["velocity"] = vec3_json(ob.velocity);
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Disc>) {
          j["type"] = "disc";
          j["center"] = vec2_json(shape.center);
          j["radius"] = shape.radius;
        } else if constexpr (std::is_same_v<T, RectObs>) {
          j["type"] = "rect";
          j["min"] = vec2_json(shape.min);
          j["size"] = vec2_json(shape.size);
        } else if constexpr (std::is_same_v<T, SegmentObs>) {
          j["type"] = "segment";
          j["a"] = vec2_json(shape.a);
          j["b"] = vec2_json(shape.b);
        } else if constexpr (std::is_same_v<T, SphereObs>) {
          j["type"] = "sphere";
          j["center"] = vec3_json(shape.center);
          j["radius"] = shape.radius;
        } else if constexpr (std::is_same_v<T, CylinderObs>) {
          j["type"] = "cylinder";
          j["center"] = vec2_json(shape.axis);
          j["z0"] = shape.z0;
          j["height"] = shape.height;
          j["radius"] = shape.radius;
        } else {
          j["type"] = "cloud";  // not expected in records; kept readable anyway
          json pts = json::array();
          for (const Vec3& p : shape.points) pts.push_back(vec3_json(p));
          j["points"] = pts;
        }
      },
      ob.shape);
  return j;
}

Obstacle obstacle_from(const json& j) {
  Obstacle ob;
  ob.id = j.value("id", 0);
  if (j.contains("velocity")) ob.velocity = vec3_from(j.at("velocity"));
  const std::string type = j.at("type");
  if (type == "disc") {
    ob.shape = Disc{vec2_from(j.at("center")), j.at("radius")};
  } else if (type == "rect") {
    ob.shape = RectObs{vec2_from(j.at("min")), vec2_from(j.at("size"))};
  } else if (type == "segment") {
    ob.shape = SegmentObs{vec2_from(j.at("a")), vec2_from(j.at("b"))};
  } else if (type == "sphere") {
    ob.shape = SphereObs{vec3_from(j.at("center")), j.at("radius")};
  } else if (type == "cylinder") {
    ob.shape = CylinderObs{vec2_from(j.at("center")), j.at("z0"), j.at("height"),
                           j.at("radius")};
  } else if (type == "cloud") {
    CloudObs c;
    for (const json& p : j.at("points")) c.points.push_back(vec3_from(p));
    ob.shape = c;
  } else {
    throw MissingDataError("run record: unknown obstacle type '" + type + "'");
  }
  return ob;
}

}  // namespace

void write_run_record(const std::string& path, const RunRecord& r) {
  json j;
  j["bounds"]["min"] = vec3_json(r.bounds.min);
  j["bounds"]["max"] = vec3_json(r.bounds.max);
  j["d_eps"] = r.d_eps;
  json obs = json::array();
  for (const Obstacle& ob : r.obstacles) obs.push_back(obstacle_json(ob));
  j["obstacles"] = obs;
  json snaps = json::array();
  for (std::size_t i = 0; i < r.fire_snapshots.size(); ++i) {
    json s;
    s["t"] = i < r.fire_snapshot_times.size() ? r.fire_snapshot_times[i] : 0.0;
    json pts = json::array();
    for (const Vec3& p : r.fire_snapshots[i]) pts.push_back(vec3_json(p));
    s["points"] = pts;
    snaps.push_back(s);
  }
  j["fire_snapshots"] = snaps;
  json paths = json::array();
  for (const Path& p : r.planned_paths) {
    json jp = json::array();
    for (const Vec3& v : p) jp.push_back(vec3_json(v));
    paths.push_back(jp);
  }
  j["planned_paths"] = paths;

  std::ofstream out = open_out(path);
  out << j.dump(1) << "\n";
}

RunRecord read_run_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingDataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw MissingDataError(path + ": not valid JSON (" + e.what() + ")");
  }
  RunRecord r;
  try {
    r.bounds.min = vec3_from(j.at("bounds").at("min"));
    r.bounds.max = vec3_from(j.at("bounds").at("max"));
    r.d_eps = j.value("d_eps", 1.0);
    for (const json& ob : j.value("obstacles", json::array())) {
      r.obstacles.push_back(obstacle_from(ob));
    }
    for (const json& s : j.value("fire_snapshots", json::array())) {
      std::vector<Vec3> pts;
      for (const json& p : s.at("points")) pts.push_back(vec3_from(p));
      r.fire_snapshots.push_back(std::move(pts));
      r.fire_snapshot_times.push_back(s.value("t", 0.0));
    }
    for (const json& jp : j.value("planned_paths", json::array())) {
      Path p;
      for (const json& v : jp) p.push_back(vec3_from(v));
      r.planned_paths.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw MissingDataError(path + ": malformed run record (" + std::string(e.what()) + ")");
  }
  return r;
}

// ---------------------------------------------------------------------------
// SVG plots
// ---------------------------------------------------------------------------

namespace {

struct Viewport {
  double margin = 50.0;
  double scale = 1.0;
  double width = 800.0;
  double height = 800.0;
  Vec2 world_min;
  double world_h = 1.0;

  double x(double wx) const { return margin + (wx - world_min.x) * scale; }
  double y(double wy) const { return margin + (world_h - (wy - world_min.y)) * scale; }
};

Viewport fit_viewport(const WorldBounds& b) {
  Viewport vp;
  const double dx = std::max(b.max.x - b.min.x, 1e-6);
  const double dy = std::max(b.max.y - b.min.y, 1e-6);
  const double usable = 800.0 - 2.0 * vp.margin;
  vp.scale = std::min(usable / dx, usable / dy);
  vp.width = 2.0 * vp.margin + dx * vp.scale;
  vp.height = 2.0 * vp.margin + dy * vp.scale;
  vp.world_min = b.min.xy();
  vp.world_h = dy;
  return vp;
}

std::string f1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string f3g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Early-to-late fire front color ramp (yellow to deep red).
std::string fire_color(double f) {
  const int r = static_cast<int>(245 + f * (198 - 245));
  const int g = static_cast<int>(197 + f * (40 - 197));
  const int b = static_cast<int>(66 + f * (8 - 66));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

const char* agent_color(std::size_t i) {
  static const char* colors[] = {"#2b6cb0", "#2f855a", "#b7791f",
                                 "#805ad5", "#c53030", "#319795"};
  return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

void polyline(std::ostream& out, const std::vector<Vec2>& pts, const std::string& stroke,
              double width, const std::string& dash = "") {
  if (pts.size() < 2) return;
  out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
      << "\"";
  if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
  out << " points=\"";
  for (const Vec2& p : pts) out << f1(p.x) << ',' << f1(p.y) << ' ';
  out << "\"/>\n";
}

void require_samples(const std::vector<TrajectoryFile>& trajectories) {
  for (const TrajectoryFile& tf : trajectories) {
    if (!tf.samples.empty()) return;
  }
  throw MissingDataError("no trajectory samples to plot");
}

}  // namespace

void write_topdown_svg(const std::string& path, const RunRecord& r,
                       const std::vector<TrajectoryFile>& trajectories) {
  require_samples(trajectories);
  const Viewport vp = fit_viewport(r.bounds);
  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f1(vp.width)
      << "\" height=\"" << f1(vp.height) << "\" viewBox=\"0 0 " << f1(vp.width) << ' '
      << f1(vp.height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out << "<rect x=\"" << f1(vp.x(r.bounds.min.x)) << "\" y=\"" << f1(vp.y(r.bounds.max.y))
      << "\" width=\"" << f1((r.bounds.max.x - r.bounds.min.x) * vp.scale) << "\" height=\""
      << f1((r.bounds.max.y - r.bounds.min.y) * vp.scale)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

  for (const Obstacle& ob : r.obstacles) {
    std::visit(
        [&](const auto& shape) {
          using T = std::decay_t<decltype(shape)>;
          if constexpr (std::is_same_v<T, Disc>) {
            out << "<circle cx=\"" << f1(vp.x(shape.center.x)) << "\" cy=\""
                << f1(vp.y(shape.center.y)) << "\" r=\"" << f1(shape.radius * vp.scale)
                << "\" fill=\"#9aa5b1\" fill-opacity=\"0.85\"/>\n";
          } else if constexpr (std::is_same_v<T, RectObs>) {
            out << "<rect x=\"" << f1(vp.x(shape.min.x)) << "\" y=\""
                << f1(vp.y(shape.min.y + shape.size.y)) << "\" width=\""
                << f1(shape.size.x * vp.scale) << "\" height=\""
                << f1(shape.size.y * vp.scale)
                << "\" fill=\"#9aa5b1\" fill-opacity=\"0.85\"/>\n";
          } else if constexpr (std::is_same_v<T, SegmentObs>) {
            out << "<line x1=\"" << f1(vp.x(shape.a.x)) << "\" y1=\"" << f1(vp.y(shape.a.y))
                << "\" x2=\"" << f1(vp.x(shape.b.x)) << "\" y2=\"" << f1(vp.y(shape.b.y))
                << "\" stroke=\"#5a6570\" stroke-width=\"3\"/>\n";
          } else if constexpr (std::is_same_v<T, SphereObs>) {
            out << "<circle cx=\"" << f1(vp.x(shape.center.x)) << "\" cy=\""
                << f1(vp.y(shape.center.y)) << "\" r=\"" << f1(shape.radius * vp.scale)
                << "\" fill=\"#9aa5b1\" fill-opacity=\"0.5\" stroke=\"#5a6570\""
                << " stroke-dasharray=\"4 3\"/>\n";
          } else if constexpr (std::is_same_v<T, CylinderObs>) {
            out << "<circle cx=\"" << f1(vp.x(shape.axis.x)) << "\" cy=\""
                << f1(vp.y(shape.axis.y)) << "\" r=\"" << f1(shape.radius * vp.scale)
                << "\" fill=\"#8a958f\" fill-opacity=\"0.85\"/>\n";
          } else {
            for (const Vec3& p : shape.points) {
              out << "<circle cx=\"" << f1(vp.x(p.x)) << "\" cy=\"" << f1(vp.y(p.y))
                  << "\" r=\"2\" fill=\"#5a6570\"/>\n";
            }
          }
        },
        ob.shape);
  }

  const std::size_t n_snaps = r.fire_snapshots.size();
  for (std::size_t i = 0; i < n_snaps; ++i) {
    const double f = n_snaps > 1 ? static_cast<double>(i) / (n_snaps - 1) : 1.0;
    const std::string color = fire_color(f);
    const std::vector<Vec3>& pts = r.fire_snapshots[i];
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 1500);
    for (std::size_t p = 0; p < pts.size(); p += stride) {
      out << "<circle cx=\"" << f1(vp.x(pts[p].x)) << "\" cy=\"" << f1(vp.y(pts[p].y))
          << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
    }
  }

  for (const Path& plan : r.planned_paths) {
    std::vector<Vec2> pts;
    pts.reserve(plan.size());
    for (const Vec3& p : plan) pts.push_back({vp.x(p.x), vp.y(p.y)});
    polyline(out, pts, "#777777", 1.5, "6 4");
    if (!plan.empty()) {
      const Vec2 g{vp.x(plan.back().x), vp.y(plan.back().y)};
      out << "<line x1=\"" << f1(g.x - 5) << "\" y1=\"" << f1(g.y - 5) << "\" x2=\""
          << f1(g.x + 5) << "\" y2=\"" << f1(g.y + 5)
          << "\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
      out << "<line x1=\"" << f1(g.x - 5) << "\" y1=\"" << f1(g.y + 5) << "\" x2=\""
          << f1(g.x + 5) << "\" y2=\"" << f1(g.y - 5)
          << "\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
    }
  }

  for (std::size_t a = 0; a < trajectories.size(); ++a) {
    const std::vector<TrajectorySample>& ss = trajectories[a].samples;
    if (ss.empty()) continue;
    // Split the flight into mode runs so avoidance episodes stand out.
    std::vector<Vec2> run;
    Mode mode = ss.front().mode;
    const auto flush = [&](Mode m) {
      polyline(out, run, m == Mode::Avoiding ? "#d23b3b" : "#1f8a4c", 2.0);
    };
    for (const TrajectorySample& s : ss) {
      const Vec2 p{vp.x(s.pos.x), vp.y(s.pos.y)};
      if (s.mode != mode) {
        run.push_back(p);  // close the previous run at the switch point
        flush(mode);
        run.clear();
        mode = s.mode;
      }
      run.push_back(p);
    }
    flush(mode);
    const Vec2 s0{vp.x(ss.front().pos.x), vp.y(ss.front().pos.y)};
    out << "<circle cx=\"" << f1(s0.x) << "\" cy=\"" << f1(s0.y)
        << "\" r=\"4\" fill=\"#ffffff\" stroke=\"#222222\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << f1(s0.x + 6) << "\" y=\"" << f1(s0.y - 6)
        << "\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#222222\">"
        << trajectories[a].agent_id << "</text>\n";
  }

  out << "<text x=\"" << f1(vp.margin) << "\" y=\"" << f1(vp.margin - 14)
      << "\" font-size=\"13\" font-family=\"sans-serif\" fill=\"#222222\">"
      << "top-down view (green: tracking, red: avoiding, dashed: planned)</text>\n";
  out << "</svg>\n";
}

void write_clearance_svg(const std::string& path, const RunRecord& r,
                         const std::vector<TrajectoryFile>& trajectories) {
  require_samples(trajectories);
  const double width = 800.0, height = 420.0, ml = 60.0, mr = 20.0, mt = 34.0, mb = 46.0;
  double t_max = 0.0, c_max = 0.0;
  for (const TrajectoryFile& tf : trajectories) {
    for (const TrajectorySample& s : tf.samples) {
      t_max = std::max(t_max, s.t);
      if (std::isfinite(s.min_clearance)) c_max = std::max(c_max, s.min_clearance);
    }
  }
  if (t_max <= 0.0) t_max = 1.0;
  c_max = std::max({c_max, 1.5 * r.d_eps, 1e-6});

  const double px = (width - ml - mr) / t_max;
  const double py = (height - mt - mb) / c_max;
  const auto X = [&](double t) { return ml + t * px; };
  const auto Y = [&](double c) { return height - mb - std::min(c, c_max) * py; };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double t = t_max * i / 5.0;
    const double c = c_max * i / 5.0;
    out << "<line x1=\"" << f1(X(t)) << "\" y1=\"" << f1(height - mb) << "\" x2=\""
        << f1(X(t)) << "\" y2=\"" << f1(mt)
        << "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << f1(X(t)) << "\" y=\"" << f1(height - mb + 16)
        << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\""
        << " fill=\"#444444\">" << f3g(t) << "</text>\n";
    out << "<line x1=\"" << f1(ml) << "\" y1=\"" << f1(Y(c)) << "\" x2=\""
        << f1(width - mr) << "\" y2=\"" << f1(Y(c))
        << "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << f1(ml - 6) << "\" y=\"" << f1(Y(c) + 4)
        << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\""
        << " fill=\"#444444\">" << f3g(c) << "</text>\n";
  }
  out << "<line x1=\"" << f1(ml) << "\" y1=\"" << f1(height - mb) << "\" x2=\""
      << f1(width - mr) << "\" y2=\"" << f1(height - mb)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << f1(ml) << "\" y1=\"" << f1(height - mb) << "\" x2=\"" << f1(ml)
      << "\" y2=\"" << f1(mt) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // Safety envelope.
  out << "<line x1=\"" << f1(ml) << "\" y1=\"" << f1(Y(r.d_eps)) << "\" x2=\""
      << f1(width - mr) << "\" y2=\"" << f1(Y(r.d_eps))
      << "\" stroke=\"#d23b3b\" stroke-width=\"1.5\" stroke-dasharray=\"7 4\"/>\n";
  out << "<text x=\"" << f1(width - mr - 4) << "\" y=\"" << f1(Y(r.d_eps) - 5)
      << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\""
      << " fill=\"#d23b3b\">safety envelope " << f3g(r.d_eps) << "</text>\n";

  for (std::size_t a = 0; a < trajectories.size(); ++a) {
    const std::vector<TrajectorySample>& ss = trajectories[a].samples;
    std::vector<Vec2> pts;
    pts.reserve(ss.size());
    for (const TrajectorySample& s : ss) pts.push_back({X(s.t), Y(s.min_clearance)});
    polyline(out, pts, agent_color(a), 1.8);
    out << "<text x=\"" << f1(ml + 8 + 70.0 * static_cast<double>(a)) << "\" y=\""
        << f1(mt - 10) << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
        << agent_color(a) << "\">agent " << trajectories[a].agent_id << "</text>\n";
  }

  out << "<text x=\"" << f1(width / 2) << "\" y=\"" << f1(height - 10)
      << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\""
      << " fill=\"#222222\">time (s)</text>\n";
  out << "<text x=\"14\" y=\"" << f1(mt - 10)
      << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"#222222\">"
      << "clearance (m)</text>\n";
  out << "</svg>\n";
}

// ---------------------------------------------------------------------------
// Batch summary
// ---------------------------------------------------------------------------

std::string batch_summary_text(const BatchSummary& b) {
  std::ostringstream out;
  out << "mode_a: " << to_string(b.mode_a) << "\n";
  out << "mode_b: " << to_string(b.mode_b) << "\n";
  out << "pairs: " << b.pairs << "\n";
  out << "both_ok: " << b.both_ok << "\n";
  out << "a_wins: " << b.a_wins << "\n";
  out << "win_rate: " << format_float(b.win_rate) << "\n";
  out << "median_length_gain: " << format_float(b.median_length_gain) << "\n";
  out << "median_time_gain: " << format_float(b.median_time_gain) << "\n";
  out << "seed,a_ok,b_ok,a_path_length,b_path_length,a_mission_time,b_mission_time,"
         "a_replans,b_replans\n";
  for (const PairOutcome& po : b.outcomes) {
    out << po.seed << ',' << po.a_ok << ',' << po.b_ok << ','
        << format_float(po.a.path_length) << ',' << format_float(po.b.path_length) << ','
        << format_float(po.a.mission_time) << ',' << format_float(po.b.mission_time) << ','
        << po.a.replans << ',' << po.b.replans << "\n";
  }
  for (const PairOutcome& po : b.outcomes) {
    if (!po.a_ok && !po.a_error.empty()) {
      out << "# seed " << po.seed << " a: " << po.a_error << "\n";
    }
    if (!po.b_ok && !po.b_error.empty()) {
      out << "# seed " << po.seed << " b: " << po.b_error << "\n";
    }
  }
  for (const std::string& e : b.errors) out << "# " << e << "\n";
  return out.str();
}

void write_batch_summary(const std::string& path, const BatchSummary& summary) {
  std::ofstream out = open_out(path);
  out << batch_summary_text(summary);
}

}  // namespace firenav
