#include "firenav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace firenav {
namespace {

using nlohmann::json;

// Collects "field: message" lines while a document is walked, so one pass can
// report every problem instead of stopping at the first.
struct Issues {
  std::vector<std::string> lines;

  void add(const std::string& field, const std::string& msg) {
    lines.push_back(field + ": " + msg);
  }
  bool ok() const { return lines.empty(); }
};

const json* child(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

bool get_number(const json& j, const char* key, const std::string& field, Issues& iss,
                double* out, bool required = false) {
  const json* c = child(j, key);
  if (!c) {
    if (required) iss.add(field, "missing required number");
    return false;
  }
  if (!c->is_number()) {
    iss.add(field, "expected a number");
    return false;
  }
  *out = c->get<double>();
  return true;
}

bool get_int(const json& j, const char* key, const std::string& field, Issues& iss,
             int* out, bool required = false) {
  const json* c = child(j, key);
  if (!c) {
    if (required) iss.add(field, "missing required integer");
    return false;
  }
  if (!c->is_number_integer()) {
    iss.add(field, "expected an integer");
    return false;
  }
  *out = c->get<int>();
  return true;
}

bool get_bool(const json& j, const char* key, const std::string& field, Issues& iss,
              bool* out) {
  const json* c = child(j, key);
  if (!c) return false;
  if (!c->is_boolean()) {
    iss.add(field, "expected true or false");
    return false;
  }
  *out = c->get<bool>();
  return true;
}

bool get_string(const json& j, const char* key, const std::string& field, Issues& iss,
                std::string* out, bool required = false) {
  const json* c = child(j, key);
  if (!c) {
    if (required) iss.add(field, "missing required string");
    return false;
  }
  if (!c->is_string()) {
    iss.add(field, "expected a string");
    return false;
  }
  *out = c->get<std::string>();
  return true;
}

bool number_array(const json& j, const std::string& field, Issues& iss, size_t n,
                  double* out) {
  if (!j.is_array() || j.size() != n) {
    iss.add(field, "expected an array of " + std::to_string(n) + " numbers");
    return false;
  }
  for (size_t i = 0; i < n; ++i) {
    if (!j[i].is_number()) {
      iss.add(field, "expected an array of " + std::to_string(n) + " numbers");
      return false;
    }
    out[i] = j[i].get<double>();
  }
  return true;
}

bool get_vec3(const json& j, const char* key, const std::string& field, Issues& iss,
              Vec3* out, bool required = false) {
  const json* c = child(j, key);
  if (!c) {
    if (required) iss.add(field, "missing required [x, y, z] array");
    return false;
  }
  double v[3];
  if (!number_array(*c, field, iss, 3, v)) return false;
  *out = {v[0], v[1], v[2]};
  return true;
}

bool get_vec2(const json& j, const char* key, const std::string& field, Issues& iss,
              Vec2* out, bool required = false) {
  const json* c = child(j, key);
  if (!c) {
    if (required) iss.add(field, "missing required [x, y] array");
    return false;
  }
  double v[2];
  if (!number_array(*c, field, iss, 2, v)) return false;
  *out = {v[0], v[1]};
  return true;
}

// ---------------------------------------------------------------------------
// Block parsers
// ---------------------------------------------------------------------------

void parse_obstacle(const json& j, int index, const std::string& base, Issues& iss,
                    std::vector<Obstacle>& out) {
  const std::string f = base + "[" + std::to_string(index) + "]";
  if (!j.is_object()) {
    iss.add(f, "expected an object");
    return;
  }
  Obstacle ob;
  ob.id = index;
  get_int(j, "id", f + ".id", iss, &ob.id);
  get_vec3(j, "velocity", f + ".velocity", iss, &ob.velocity);

  std::string type;
  if (!get_string(j, "type", f + ".type", iss, &type, true)) return;

  if (type == "disc") {
    Disc d;
    get_vec2(j, "center", f + ".center", iss, &d.center, true);
    get_number(j, "radius", f + ".radius", iss, &d.radius, true);
    if (d.radius <= 0.0) iss.add(f + ".radius", "must be positive");
    ob.shape = d;
  } else if (type == "rect") {
    RectObs r;
    get_vec2(j, "min", f + ".min", iss, &r.min, true);
    get_vec2(j, "size", f + ".size", iss, &r.size, true);
    if (r.size.x <= 0.0 || r.size.y <= 0.0) iss.add(f + ".size", "must be positive");
    ob.shape = r;
  } else if (type == "segment") {
    SegmentObs s;
    get_vec2(j, "a", f + ".a", iss, &s.a, true);
    get_vec2(j, "b", f + ".b", iss, &s.b, true);
    ob.shape = s;
  } else if (type == "sphere") {
    SphereObs s;
    get_vec3(j, "center", f + ".center", iss, &s.center, true);
    get_number(j, "radius", f + ".radius", iss, &s.radius, true);
    if (s.radius <= 0.0) iss.add(f + ".radius", "must be positive");
    ob.shape = s;
  } else if (type == "cylinder") {
    CylinderObs c;
    get_vec2(j, "center", f + ".center", iss, &c.axis, true);
    get_number(j, "z0", f + ".z0", iss, &c.z0);
    get_number(j, "height", f + ".height", iss, &c.height, true);
    get_number(j, "radius", f + ".radius", iss, &c.radius, true);
    if (c.height <= 0.0) iss.add(f + ".height", "must be positive");
    if (c.radius <= 0.0) iss.add(f + ".radius", "must be positive");
    ob.shape = c;
  } else {
    iss.add(f + ".type", "unknown obstacle type '" + type +
                             "' (disc, rect, segment, sphere, cylinder)");
    return;
  }
  out.push_back(ob);
}

void parse_world(const json& root, const std::string& base_dir, Issues& iss, World& w) {
  const json* jw = child(root, "world");
  if (!jw) {
    iss.add("world", "missing required block");
    return;
  }
  const json* jb = child(*jw, "bounds");
  if (!jb) {
    iss.add("world.bounds", "missing required block");
  } else {
    get_vec3(*jb, "min", "world.bounds.min", iss, &w.bounds.min, true);
    get_vec3(*jb, "max", "world.bounds.max", iss, &w.bounds.max, true);
    if (!(w.bounds.min.x < w.bounds.max.x && w.bounds.min.y < w.bounds.max.y &&
          w.bounds.min.z < w.bounds.max.z)) {
      iss.add("world.bounds", "min must be strictly below max on every axis");
    }
  }

  std::string terrain_path;
  if (get_string(*jw, "terrain", "world.terrain", iss, &terrain_path)) {
    namespace fs = std::filesystem;
    fs::path p(terrain_path);
    if (p.is_relative()) p = fs::path(base_dir) / p;
    try {
      w.terrain = load_terrain_asc(p.string());
    } catch (const std::exception& e) {
      iss.add("world.terrain", e.what());
    }
  }
  bool terrain_blocks = false;
  if (get_bool(*jw, "terrain_is_obstacle", "world.terrain_is_obstacle", iss,
               &terrain_blocks)) {
    w.terrain_is_obstacle = terrain_blocks;
    if (terrain_blocks && !w.terrain) {
      iss.add("world.terrain_is_obstacle", "set without a terrain raster");
    }
  } else {
    w.terrain_is_obstacle = w.terrain.has_value();  // sensible default
  }

  if (const json* jo = child(*jw, "obstacles")) {
    if (!jo->is_array()) {
      iss.add("world.obstacles", "expected an array");
    } else {
      for (size_t i = 0; i < jo->size(); ++i) {
        parse_obstacle((*jo)[i], static_cast<int>(i), "world.obstacles", iss, w.obstacles);
      }
    }
  }
}

void parse_reactive(const json* j, const std::string& f, Issues& iss, ReactiveConfig& r) {
  if (!j) return;
  get_number(*j, "alpha_safe", f + ".alpha_safe", iss, &r.alpha_safe);
  get_number(*j, "eps_theta", f + ".eps_theta", iss, &r.eps_theta);
  if (!(r.alpha_safe > 0.0 && r.alpha_safe < kPi / 2.0)) {
    iss.add(f + ".alpha_safe", "must lie in (0, pi/2)");
  }
  if (r.eps_theta <= 0.0) iss.add(f + ".eps_theta", "must be positive");
  std::string side;
  if (get_string(*j, "side_tiebreak", f + ".side_tiebreak", iss, &side)) {
    if (side == "ccw") r.side_tiebreak = 1;
    else if (side == "cw") r.side_tiebreak = 2;
    else iss.add(f + ".side_tiebreak", "expected 'ccw' or 'cw'");
  }
}

void parse_exec(const json* j, const std::string& f, Issues& iss, ExecConfig& e) {
  if (!j) return;
  get_number(*j, "d_trigger", f + ".d_trigger", iss, &e.d_trigger);
  get_number(*j, "d_eps", f + ".d_eps", iss, &e.d_eps);
  get_number(*j, "exit_margin", f + ".exit_margin", iss, &e.exit_margin);
  get_number(*j, "dwell", f + ".dwell", iss, &e.dwell);
  get_number(*j, "eps_theta", f + ".eps_theta", iss, &e.eps_theta);
  get_number(*j, "goal_radius", f + ".goal_radius", iss, &e.goal_radius);
  get_int(*j, "replan_cooldown_steps", f + ".replan_cooldown_steps", iss,
          &e.replan_cooldown_steps);
  std::string policy;
  if (get_string(*j, "exit_policy", f + ".exit_policy", iss, &policy)) {
    if (policy == "orientation") e.exit_policy = ExitPolicy::Orientation;
    else if (policy == "distance") e.exit_policy = ExitPolicy::Distance;
    else iss.add(f + ".exit_policy", "expected 'orientation' or 'distance'");
  }
  if (e.d_trigger <= 0.0) iss.add(f + ".d_trigger", "must be positive");
  if (e.d_eps <= 0.0) iss.add(f + ".d_eps", "must be positive");
  if (e.d_eps >= e.d_trigger) iss.add(f + ".d_eps", "must be below d_trigger");
  if (e.exit_margin < 0.0) iss.add(f + ".exit_margin", "must be non-negative");
  if (e.dwell < 0.0) iss.add(f + ".dwell", "must be non-negative");
  if (e.eps_theta <= 0.0) iss.add(f + ".eps_theta", "must be positive");
  if (e.goal_radius <= 0.0) iss.add(f + ".goal_radius", "must be positive");
  if (e.replan_cooldown_steps < 0) iss.add(f + ".replan_cooldown_steps", "must be non-negative");
}

void parse_agent(const json& j, int index, Issues& iss, std::vector<AgentSpec>& out) {
  const std::string f = "agents[" + std::to_string(index) + "]";
  if (!j.is_object()) {
    iss.add(f, "expected an object");
    return;
  }
  AgentSpec a;
  a.id = index;
  get_int(j, "id", f + ".id", iss, &a.id);

  std::string type = "unicycle";
  get_string(j, "type", f + ".type", iss, &type);
  if (type == "unicycle") a.type = AgentType::Unicycle;
  else if (type == "body3d") a.type = AgentType::Body3D;
  else if (type == "ugv") a.type = AgentType::Ugv;
  else iss.add(f + ".type", "unknown agent type '" + type + "' (unicycle, body3d, ugv)");

  std::string role = "navigate";
  get_string(j, "role", f + ".role", iss, &role);
  if (role == "navigate") a.role = AgentRole::Navigate;
  else if (role == "coverage") a.role = AgentRole::Coverage;
  else if (role == "rescue") a.role = AgentRole::Rescue;
  else iss.add(f + ".role", "unknown role '" + role + "' (navigate, coverage, rescue)");

  get_vec3(j, "start", f + ".start", iss, &a.start, true);
  get_number(j, "heading", f + ".heading", iss, &a.heading);
  if (get_vec3(j, "orientation", f + ".orientation", iss, &a.orientation)) {
    if (norm(a.orientation) < 1e-9) {
      iss.add(f + ".orientation", "must be a non-zero vector");
      a.orientation = {1.0, 0.0, 0.0};
    } else {
      a.orientation = normalized(a.orientation);
    }
  } else if (a.type == AgentType::Body3D) {
    a.orientation = {std::cos(a.heading), std::sin(a.heading), 0.0};
  }

  Vec3 single;
  if (get_vec3(j, "goal", f + ".goal", iss, &single)) a.goals.push_back(single);
  if (const json* jg = child(j, "goals")) {
    if (!jg->is_array()) {
      iss.add(f + ".goals", "expected an array of [x, y, z] arrays");
    } else {
      for (size_t i = 0; i < jg->size(); ++i) {
        double v[3];
        const std::string gf = f + ".goals[" + std::to_string(i) + "]";
        if (number_array((*jg)[i], gf, iss, 3, v)) a.goals.push_back({v[0], v[1], v[2]});
      }
    }
  }
  if (a.goals.empty() && a.role == AgentRole::Navigate) {
    iss.add(f + ".goal", "navigate agents need at least one goal");
  }

  if (const json* jl = child(j, "limits")) {
    get_number(*jl, "v_max", f + ".limits.v_max", iss, &a.limits.v_max);
    get_number(*jl, "u_max", f + ".limits.u_max", iss, &a.limits.u_max);
  }
  if (a.limits.v_max <= 0.0) iss.add(f + ".limits.v_max", "must be positive");
  if (a.limits.u_max <= 0.0) iss.add(f + ".limits.u_max", "must be positive");

  get_number(j, "sensor_range", f + ".sensor_range", iss, &a.sensor_range);
  if (a.sensor_range <= 0.0) iss.add(f + ".sensor_range", "must be positive");

  parse_reactive(child(j, "reactive"), f + ".reactive", iss, a.reactive);
  parse_exec(child(j, "exec"), f + ".exec", iss, a.exec);
  if (a.exec.d_trigger > a.sensor_range) {
    iss.add(f + ".exec.d_trigger", "exceeds the sensor range");
  }
  out.push_back(a);
}

void parse_fire(const json* j, Issues& iss, std::optional<FireSpec>& out) {
  if (!j) return;
  if (!j->is_object()) {
    iss.add("fire", "expected an object");
    return;
  }
  FireSpec fs;
  get_int(*j, "nx", "fire.nx", iss, &fs.nx, true);
  get_int(*j, "ny", "fire.ny", iss, &fs.ny, true);
  get_int(*j, "nz", "fire.nz", iss, &fs.nz);
  get_number(*j, "cell", "fire.cell", iss, &fs.cell);
  get_vec3(*j, "origin", "fire.origin", iss, &fs.origin);
  if (fs.nx < 1 || fs.ny < 1 || fs.nz < 1) iss.add("fire", "grid dimensions must be at least 1");
  if (fs.cell <= 0.0) iss.add("fire.cell", "must be positive");

  const json* ji = child(*j, "ignition");
  if (!ji) {
    iss.add("fire.ignition", "missing required [i, j, k] cell index");
  } else if (!ji->is_array() || ji->size() != 3 || !(*ji)[0].is_number_integer() ||
             !(*ji)[1].is_number_integer() || !(*ji)[2].is_number_integer()) {
    iss.add("fire.ignition", "expected an array of 3 integers");
  } else {
    for (int d = 0; d < 3; ++d) fs.ignition[d] = (*ji)[d].get<int>();
    const int n[3] = {fs.nx, fs.ny, fs.nz};
    for (int d = 0; d < 3; ++d) {
      if (fs.ignition[d] < 0 || fs.ignition[d] >= n[d]) {
        iss.add("fire.ignition", "cell index outside the grid");
        break;
      }
    }
  }

  get_number(*j, "T0", "fire.T0", iss, &fs.t0);
  get_number(*j, "T_trigger", "fire.T_trigger", iss, &fs.t_trigger);
  get_number(*j, "kappa", "fire.kappa", iss, &fs.kappa);
  get_number(*j, "rho", "fire.rho", iss, &fs.rho);
  get_vec3(*j, "wind", "fire.wind", iss, &fs.wind);
  get_number(*j, "intensity_scale", "fire.intensity_scale", iss, &fs.intensity_scale);
  get_number(*j, "start_time", "fire.start_time", iss, &fs.start_time);
  if (fs.t0 < 0.0) iss.add("fire.T0", "must be non-negative");
  if (fs.t_trigger <= 0.0) iss.add("fire.T_trigger", "must be positive");
  if (fs.rho < 0.0) iss.add("fire.rho", "must be non-negative");
  if (fs.intensity_scale < 0.0) iss.add("fire.intensity_scale", "must be non-negative");
  if (fs.start_time < 0.0) iss.add("fire.start_time", "must be non-negative");
  out = fs;
}

void parse_planner(const json* j, Issues& iss, PlannerSpec& p) {
  if (!j) return;
  std::string mode;
  if (get_string(*j, "mode", "planner.mode", iss, &mode)) {
    if (mode == "reactive") p.mode = PlannerMode::Reactive;
    else if (mode == "hybrid") p.mode = PlannerMode::Hybrid;
    else iss.add("planner.mode", "expected 'reactive' or 'hybrid'");
  }
  if (const json* jr = child(*j, "rrt")) {
    get_number(*jr, "step", "planner.rrt.step", iss, &p.rrt.step_size);
    get_int(*jr, "max_iter", "planner.rrt.max_iter", iss, &p.rrt.max_iterations);
    get_number(*jr, "goal_bias", "planner.rrt.goal_bias", iss, &p.rrt.goal_bias);
    get_number(*jr, "corridor_bias", "planner.rrt.corridor_bias", iss, &p.rrt.corridor_bias);
    get_number(*jr, "clearance", "planner.rrt.clearance", iss, &p.rrt.clearance);
    int seed = 0;
    if (get_int(*jr, "seed", "planner.rrt.seed", iss, &seed)) {
      if (seed < 0) iss.add("planner.rrt.seed", "must be non-negative");
      else p.rrt.seed = static_cast<std::uint64_t>(seed);
    }
    if (p.rrt.step_size <= 0.0) iss.add("planner.rrt.step", "must be positive");
    if (p.rrt.max_iterations < 1) iss.add("planner.rrt.max_iter", "must be at least 1");
    if (p.rrt.goal_bias < 0.0 || p.rrt.goal_bias > 1.0) {
      iss.add("planner.rrt.goal_bias", "must lie in [0, 1]");
    }
    if (p.rrt.corridor_bias < 0.0 || p.rrt.corridor_bias > 1.0) {
      iss.add("planner.rrt.corridor_bias", "must lie in [0, 1]");
    }
    if (p.rrt.goal_bias + p.rrt.corridor_bias > 1.0) {
      iss.add("planner.rrt", "goal_bias + corridor_bias must not exceed 1");
    }
    if (p.rrt.clearance < 0.0) iss.add("planner.rrt.clearance", "must be non-negative");
  }
  if (const json* jw = child(*j, "weights")) {
    get_number(*jw, "alpha", "planner.weights.alpha", iss, &p.weights.alpha);
    get_number(*jw, "beta", "planner.weights.beta", iss, &p.weights.beta);
    get_number(*jw, "gamma", "planner.weights.gamma", iss, &p.weights.gamma);
    const double w[3] = {p.weights.alpha, p.weights.beta, p.weights.gamma};
    const char* names[3] = {"alpha", "beta", "gamma"};
    for (int i = 0; i < 3; ++i) {
      if (w[i] < 0.0 || w[i] > 1.0) {
        iss.add(std::string("planner.weights.") + names[i], "must lie in [0, 1]");
      }
    }
    if (std::abs(w[0] + w[1] + w[2] - 1.0) > 1e-9) {
      iss.add("planner.weights", "must sum to 1");
    }
  }
  get_int(*j, "candidates", "planner.candidates", iss, &p.candidates);
  if (p.candidates < 1) iss.add("planner.candidates", "must be at least 1");
}

void parse_mission(const json* j, Issues& iss, std::optional<MissionSpec>& out) {
  if (!j) return;
  if (!j->is_object()) {
    iss.add("mission", "expected an object");
    return;
  }
  MissionSpec m;
  get_int(*j, "partitions", "mission.partitions", iss, &m.partitions, true);
  if (m.partitions < 1) iss.add("mission.partitions", "must be at least 1");
  get_vec3(*j, "safe_zone", "mission.safe_zone", iss, &m.safe_zone, true);

  if (const json* jv = child(*j, "victims")) {
    if (!jv->is_array()) {
      iss.add("mission.victims", "expected an array");
    } else {
      for (size_t i = 0; i < jv->size(); ++i) {
        const std::string f = "mission.victims[" + std::to_string(i) + "]";
        Victim v;
        v.id = static_cast<int>(i);
        if (!(*jv)[i].is_object()) {
          iss.add(f, "expected an object");
          continue;
        }
        get_int((*jv)[i], "id", f + ".id", iss, &v.id);
        get_vec3((*jv)[i], "pos", f + ".pos", iss, &v.pos, true);
        m.victims.push_back(v);
      }
      for (size_t i = 0; i < m.victims.size(); ++i) {
        for (size_t k = i + 1; k < m.victims.size(); ++k) {
          if (m.victims[i].id == m.victims[k].id) {
            iss.add("mission.victims", "duplicate victim id " + std::to_string(m.victims[i].id));
          }
        }
      }
    }
  }
  if (const json* jf = child(*j, "footprint")) {
    get_number(*jf, "altitude", "mission.footprint.altitude", iss, &m.footprint.altitude);
    get_number(*jf, "half_angle", "mission.footprint.half_angle", iss, &m.footprint.half_angle);
    if (m.footprint.altitude <= 0.0) iss.add("mission.footprint.altitude", "must be positive");
    if (!(m.footprint.half_angle > 0.0 && m.footprint.half_angle < kPi / 2.0)) {
      iss.add("mission.footprint.half_angle", "must lie in (0, pi/2)");
    }
  }
  if (const json* je = child(*j, "energy")) {
    m.has_energy = true;
    get_number(*je, "p_base", "mission.energy.p_base", iss, &m.energy.p_base);
    get_number(*je, "p_speed", "mission.energy.p_speed", iss, &m.energy.p_speed);
    get_number(*je, "p_climb", "mission.energy.p_climb", iss, &m.energy.p_climb);
    if (m.energy.p_base < 0.0) iss.add("mission.energy.p_base", "must be non-negative");
    if (m.energy.p_speed < 0.0) iss.add("mission.energy.p_speed", "must be non-negative");
    if (m.energy.p_climb < 0.0) iss.add("mission.energy.p_climb", "must be non-negative");
  }
  out = m;
}

void parse_randomize(const json* j, Issues& iss, std::optional<RandomizeSpec>& out) {
  if (!j) return;
  RandomizeSpec r;
  get_number(*j, "obstacle_jitter", "randomize.obstacle_jitter", iss, &r.obstacle_jitter);
  get_number(*j, "goal_jitter", "randomize.goal_jitter", iss, &r.goal_jitter);
  if (r.obstacle_jitter < 0.0) iss.add("randomize.obstacle_jitter", "must be non-negative");
  if (r.goal_jitter < 0.0) iss.add("randomize.goal_jitter", "must be non-negative");
  out = r;
}

void parse_sim(const json* j, Issues& iss, SimSpec& s) {
  if (!j) return;
  get_number(*j, "dt", "sim.dt", iss, &s.dt);
  get_number(*j, "t_max", "sim.t_max", iss, &s.t_max);
  int seed = 1;
  if (get_int(*j, "seed", "sim.seed", iss, &seed)) {
    if (seed < 0) iss.add("sim.seed", "must be non-negative");
    else s.seed = static_cast<std::uint64_t>(seed);
  }
  if (!(s.dt > 0.0)) iss.add("sim.dt", "must be positive");
  if (!(s.t_max > s.dt)) iss.add("sim.t_max", "must exceed dt");
}

bool inside_bounds(const WorldBounds& b, Vec3 p) {
  return p.x >= b.min.x && p.x <= b.max.x && p.y >= b.min.y && p.y <= b.max.y &&
         p.z >= b.min.z && p.z <= b.max.z;
}

double obstacle_clearance(const World& w, Vec3 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Obstacle& ob : w.obstacles) best = std::min(best, distance_to(ob, p).dist);
  return best;
}

}  // namespace

std::string to_string(AgentType t) {
  switch (t) {
    case AgentType::Unicycle: return "unicycle";
    case AgentType::Body3D: return "body3d";
    case AgentType::Ugv: return "ugv";
  }
  return "?";
}

std::string to_string(AgentRole r) {
  switch (r) {
    case AgentRole::Navigate: return "navigate";
    case AgentRole::Coverage: return "coverage";
    case AgentRole::Rescue: return "rescue";
  }
  return "?";
}

std::string to_string(PlannerMode m) {
  return m == PlannerMode::Hybrid ? "hybrid" : "reactive";
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  Issues iss;
  const World& w = s.world;

  std::vector<int> ids;
  for (size_t i = 0; i < s.agents.size(); ++i) {
    const AgentSpec& a = s.agents[i];
    const std::string f = "agents[" + std::to_string(i) + "]";
    if (std::find(ids.begin(), ids.end(), a.id) != ids.end()) {
      iss.add(f + ".id", "duplicate agent id " + std::to_string(a.id));
    }
    ids.push_back(a.id);

    if (!inside_bounds(w.bounds, a.start)) {
      iss.add(f + ".start", "outside the world bounds");
    } else {
      const double c = obstacle_clearance(w, a.start);
      if (c <= 0.0) iss.add(f + ".start", "collides with an obstacle at t = 0");
    }
    for (size_t g = 0; g < a.goals.size(); ++g) {
      const std::string gf =
          a.goals.size() == 1 ? f + ".goal" : f + ".goals[" + std::to_string(g) + "]";
      if (!inside_bounds(w.bounds, a.goals[g])) {
        iss.add(gf, "outside the world bounds");
      } else if (obstacle_clearance(w, a.goals[g]) <= 0.0) {
        iss.add(gf, "collides with an obstacle at t = 0");
      }
    }
    if (a.type == AgentType::Ugv && w.terrain) {
      if (!w.terrain->contains(a.start.x, a.start.y)) {
        iss.add(f + ".start", "outside the mapped terrain");
      }
      for (size_t g = 0; g < a.goals.size(); ++g) {
        if (!w.terrain->contains(a.goals[g].x, a.goals[g].y)) {
          iss.add(f + ".goals", "outside the mapped terrain");
        }
      }
    }
    if ((a.role == AgentRole::Coverage || a.role == AgentRole::Rescue) && !s.mission) {
      iss.add(f + ".role", "needs a mission block");
    }
  }

  if (s.planner.weights.gamma > 0.0 && !s.fire) {
    iss.add("planner.weights.gamma", "hazard weighting needs a fire block");
  }
  if (s.mission) {
    if (!inside_bounds(w.bounds, s.mission->safe_zone)) {
      iss.add("mission.safe_zone", "outside the world bounds");
    }
    for (size_t i = 0; i < s.mission->victims.size(); ++i) {
      if (!inside_bounds(w.bounds, s.mission->victims[i].pos)) {
        iss.add("mission.victims[" + std::to_string(i) + "].pos", "outside the world bounds");
      }
    }
    int rescuers = 0, coverers = 0;
    for (const AgentSpec& a : s.agents) {
      rescuers += a.role == AgentRole::Rescue;
      coverers += a.role == AgentRole::Coverage;
    }
    if (rescuers > 0 && rescuers != s.mission->partitions) {
      iss.add("mission.partitions", "must match the number of rescue agents");
    }
    if (coverers > 0 && coverers != s.mission->partitions) {
      iss.add("mission.partitions", "must match the number of coverage agents");
    }
  }
  return iss.lines;
}

Scenario parse_scenario(const std::string& json_text, const std::string& base_dir,
                        const std::string& default_name) {
  Issues iss;
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidScenarioError({std::string("scenario: not valid JSON (") + e.what() + ")"});
  }
  if (!root.is_object()) throw InvalidScenarioError({"scenario: top level must be an object"});

  static const char* known[] = {"name",    "world",  "fire",      "agents",
                                "planner", "mission", "randomize", "sim"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return it.key() == k;
        }) == std::end(known)) {
      iss.add(it.key(), "unknown top-level key");
    }
  }

  Scenario s;
  s.name = default_name;
  get_string(root, "name", "name", iss, &s.name);

  parse_world(root, base_dir, iss, s.world);
  parse_fire(child(root, "fire"), iss, s.fire);

  const json* ja = child(root, "agents");
  if (!ja) {
    iss.add("agents", "missing required block");
  } else if (!ja->is_array() || ja->empty()) {
    iss.add("agents", "expected a non-empty array");
  } else {
    for (size_t i = 0; i < ja->size(); ++i) {
      parse_agent((*ja)[i], static_cast<int>(i), iss, s.agents);
    }
  }

  parse_planner(child(root, "planner"), iss, s.planner);
  parse_mission(child(root, "mission"), iss, s.mission);
  parse_randomize(child(root, "randomize"), iss, s.randomize);
  parse_sim(child(root, "sim"), iss, s.sim);

  // Ground vehicles ride on the terrain: pin their start/goal heights to it
  // before placement checks so a nominal z in the file cannot disagree.
  if (iss.ok() && s.world.terrain) {
    for (AgentSpec& a : s.agents) {
      if (a.type != AgentType::Ugv) continue;
      if (s.world.terrain->contains(a.start.x, a.start.y)) {
        a.start.z = s.world.terrain->height(a.start.x, a.start.y);
      }
      for (Vec3& g : a.goals) {
        if (s.world.terrain->contains(g.x, g.y)) g.z = s.world.terrain->height(g.x, g.y);
      }
    }
  }

  if (iss.ok()) {
    auto semantic = validate_scenario(s);
    iss.lines.insert(iss.lines.end(), semantic.begin(), semantic.end());
  }
  if (!iss.ok()) throw InvalidScenarioError(std::move(iss.lines));
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidScenarioError({"scenario: cannot open " + path});
  std::stringstream buf;
  buf << in.rdbuf();
  namespace fs = std::filesystem;
  const fs::path p(path);
  std::string name = p.stem().string();
  if (name.empty()) name = "scenario";
  return parse_scenario(buf.str(), p.parent_path().string(), name);
}

Scenario randomized_variant(const Scenario& s, std::uint64_t seed) {
  Scenario v = s;
  v.planner.rrt.seed = seed;
  v.sim.seed = seed;
  if (!s.randomize) return v;
  const RandomizeSpec& r = *s.randomize;
  if (r.obstacle_jitter == 0.0 && r.goal_jitter == 0.0) return v;

  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  const int kAttempts = 64;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Scenario candidate = v;
    std::uniform_real_distribution<double> od(-r.obstacle_jitter, r.obstacle_jitter);
    std::uniform_real_distribution<double> gd(-r.goal_jitter, r.goal_jitter);
    if (r.obstacle_jitter > 0.0) {
      for (Obstacle& ob : candidate.world.obstacles) {
        Obstacle shifted = ob;
        shifted.velocity = {od(rng), od(rng), 0.0};
        advance_obstacle(shifted, 1.0);
        shifted.velocity = ob.velocity;
        ob = shifted;
      }
    }
    if (r.goal_jitter > 0.0) {
      for (AgentSpec& a : candidate.agents) {
        for (Vec3& g : a.goals) {
          g.x += gd(rng);
          g.y += gd(rng);
        }
      }
    }
    if (validate_scenario(candidate).empty()) return candidate;
  }
  throw InvalidScenarioError(
      {"randomize: no valid placement found for seed " + std::to_string(seed) +
       " after " + std::to_string(kAttempts) + " draws"});
}

}  // namespace firenav
