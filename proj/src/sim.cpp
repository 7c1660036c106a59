#include "firenav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "firenav/planner.hpp"
#include "firenav/reactive.hpp"
#include "firenav/vehicles.hpp"

namespace firenav {

std::string to_string(SimStatus s) {
  switch (s) {
    case SimStatus::GoalReached: return "GoalReached";
    case SimStatus::Timeout: return "Timeout";
    case SimStatus::SafetyViolation: return "SafetyViolation";
    case SimStatus::MissionFailed: return "MissionFailed";
  }
  return "?";
}

namespace {

constexpr int kFireObstacleId = 9999;
constexpr double kTimeEps = 1e-12;

bool inside_bounds(const WorldBounds& b, Vec3 p) {
  return p.x >= b.min.x && p.x <= b.max.x && p.y >= b.min.y && p.y <= b.max.y &&
         p.z >= b.min.z && p.z <= b.max.z;
}

double obstacle_clearance(const World& w, Vec3 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Obstacle& ob : w.obstacles) best = std::min(best, distance_to(ob, p).dist);
  return best;
}

// Deterministic seed stream for planning events, so every (agent, event,
// candidate) triple explores a different tree while staying reproducible.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x == 0 ? 1 : x;
}

struct AvoidCmd {
  int side = 1;
  double v = 0.0;
  double rate = 0.0;  // signed turn rate (planar or in-plane)
  Vec3 u3;            // turn vector for 3D vehicles
  Vec3 v_gamma;       // escape-course velocity (world frame)
};

struct AgentRt {
  AgentSpec spec;
  UnicycleState uni;          // unicycle / ugv pose
  double z = 0.0;             // sensing plane (unicycle) or terrain height (ugv)
  Body3DState body;           // body3d pose
  std::vector<Vec3> goals;    // goal queue (mission roles get theirs composed)
  std::vector<Victim> route;  // rescue only: victim identity behind each goal
  std::size_t goal_idx = 0;
  Path path;                  // active waypoint path; path[0] is the plan origin
  ExecState exec;
  int plan_events = 0;
  double prev_dist = std::numeric_limits<double>::infinity();
  bool prev_dist_valid = false;
  Vec3 prev_escape;              // unit escape-course direction last step
  int prev_escape_obstacle = 0;  // obstacle the direction was measured against
  bool prev_escape_valid = false;
  bool done = false;
  double done_time = 0.0;
  AgentMetrics met;

  Vec3 position() const {
    if (spec.type == AgentType::Body3D) return body.e;
    return {uni.p.x, uni.p.y, z};
  }
  double heading_angle() const {
    if (spec.type == AgentType::Body3D) return std::atan2(body.a.y, body.a.x);
    return uni.theta;
  }
};

class Simulator {
 public:
  explicit Simulator(const Scenario& sc) : sc_(sc), world_(sc.world), dt_(sc.sim.dt) {}

  SimResult run();

 private:
  void init();
  void fire_update(int n, double t);
  void advance_world(int n);
  bool agent_step(AgentRt& rt, double t);  // false = simulation must stop
  void log_sample(AgentRt& rt, double t, Mode mode, double v, double u, double clearance);

  Vec3 active_waypoint(const AgentRt& rt) const {
    const std::size_t i =
        std::min(static_cast<std::size_t>(std::max(rt.exec.waypoint, 0)), rt.path.size() - 1);
    return rt.path[i];
  }

  std::vector<Vec3> hazard_points() const;
  Path plan_to(AgentRt& rt, Vec3 from, Vec3 goal, const Path* corridor);
  void set_direct_path(AgentRt& rt, Vec3 goal);
  bool rebuild_path_for_goal(AgentRt& rt, double t);  // false = stop (status set)
  void compose_mission();
  void reassign_rescues(const std::vector<Vec3>& boundary, double t);
  double clearance_at(const AgentRt& rt, Vec3 p) const;
  bool inside_burning_cell(Vec3 p) const;
  void fail(SimStatus status, const std::string& msg) {
    status_ = status;
    result_.message = msg;
    stopped_ = true;
  }

  Scenario sc_;
  World world_;
  double dt_;
  std::vector<AgentRt> agents_;

  // fire state
  FireGrid grid_;
  WindField wind_;
  bool has_fire_ = false;
  bool ignited_ = false;
  bool fire_seen_ = false;
  int reassign_step_ = -1;
  std::size_t fire_obstacle_ = 0;  // index into world_.obstacles
  std::vector<Vec3> prev_boundary_;
  int snap_every_ = 1;

  SimResult result_;
  SimStatus status_ = SimStatus::Timeout;
  bool stopped_ = false;
  double end_time_ = 0.0;
};

std::vector<Vec3> Simulator::hazard_points() const {
  std::vector<Vec3> pts;
  if (!has_fire_) return pts;
  const FireBoundary b = burning_boundary(grid_);
  pts = b.points;
  if (pts.empty()) {
    // Nothing burning yet: the declared ignition site is the known hazard.
    const FireSpec& f = *sc_.fire;
    pts.push_back(grid_.cell_center(f.ignition[0], f.ignition[1], f.ignition[2]));
  }
  return pts;
}

Path Simulator::plan_to(AgentRt& rt, Vec3 from, Vec3 goal, const Path* corridor) {
  const int K = std::max(1, sc_.planner.candidates);
  RrtParams params = sc_.planner.rrt;
  params.planar = rt.spec.type != AgentType::Body3D;

  std::vector<Path> candidates;
  candidates.reserve(K);
  for (int c = 0; c < K; ++c) {
    params.seed = mix_seed(sc_.planner.rrt.seed,
                           static_cast<std::uint64_t>(rt.spec.id) * 131 + rt.plan_events,
                           static_cast<std::uint64_t>(c));
    candidates.push_back(plan_pipeline(world_, from, goal, params, corridor));
  }
  ++rt.plan_events;
  if (K == 1) return candidates.front();

  const std::vector<Vec3> hazard = hazard_points();
  const std::vector<double> cost =
      total_cost(candidates, sc_.planner.weights, hazard.empty() ? nullptr : &hazard);
  std::size_t best = 0;
  for (std::size_t i = 1; i < cost.size(); ++i) {
    if (cost[i] < cost[best]) best = i;
  }
  return candidates[best];
}

void Simulator::set_direct_path(AgentRt& rt, Vec3 goal) {
  rt.path = {rt.position(), goal};
  rt.exec.waypoint = 1;
}

// Builds the path toward goals[goal_idx] (planned in hybrid mode for navigate
// and rescue agents, straight otherwise). Returns false after setting a
// failure status.
bool Simulator::rebuild_path_for_goal(AgentRt& rt, double t) {
  const Vec3 goal = rt.goals[rt.goal_idx];
  const bool planned = sc_.planner.mode == PlannerMode::Hybrid &&
                       rt.spec.role != AgentRole::Coverage;
  if (!planned) {
    set_direct_path(rt, goal);
    return true;
  }
  try {
    rt.path = plan_to(rt, rt.position(), goal, nullptr);
    rt.exec.waypoint = rt.path.size() > 1 ? 1 : 0;
    return true;
  } catch (const StartOrGoalBlockedError&) {
    // The vehicle is inside the planner's inflation margin. If the goal is
    // still free, fall back to direct tracking and let avoidance handle it.
    if (!inside_bounds(world_.bounds, goal) ||
        obstacle_clearance(world_, goal) <= sc_.planner.rrt.clearance) {
      fail(SimStatus::MissionFailed, "agent " + std::to_string(rt.spec.id) +
                                         ": goal unreachable at t = " + std::to_string(t));
      return false;
    }
    set_direct_path(rt, goal);
    return true;
  } catch (const NoPathFoundError&) {
    fail(SimStatus::MissionFailed, "agent " + std::to_string(rt.spec.id) +
                                       ": no path to goal at t = " + std::to_string(t));
    return false;
  }
}

void Simulator::compose_mission() {
  if (!sc_.mission) return;
  std::vector<AgentRt*> cover, rescue;
  for (AgentRt& rt : agents_) {
    if (rt.spec.role == AgentRole::Coverage) cover.push_back(&rt);
    if (rt.spec.role == AgentRole::Rescue) rescue.push_back(&rt);
  }
  if (cover.empty() && rescue.empty()) return;

  const MissionPlan plan = compose_mission_plan(sc_);
  for (std::size_t i = 0; i < cover.size() && i < plan.coverage_routes.size(); ++i) {
    cover[i]->goals = plan.coverage_routes[i];
  }
  for (std::size_t i = 0; i < rescue.size() && i < plan.rescue_routes.size(); ++i) {
    rescue[i]->route = plan.rescue_victims[i];
    rescue[i]->goals = plan.rescue_routes[i];
  }
}

void Simulator::reassign_rescues(const std::vector<Vec3>& boundary, double t) {
  for (AgentRt& rt : agents_) {
    if (rt.spec.role != AgentRole::Rescue || rt.done) continue;
    if (rt.goal_idx >= rt.route.size()) continue;  // already heading to the safe zone
    std::vector<Victim> pending(rt.route.begin() + rt.goal_idx, rt.route.end());
    pending = prioritize_victims(std::move(pending), boundary);
    const bool changed = !std::equal(pending.begin(), pending.end(),
                                     rt.route.begin() + rt.goal_idx,
                                     [](const Victim& a, const Victim& b) { return a.id == b.id; });
    if (!changed) continue;
    std::copy(pending.begin(), pending.end(), rt.route.begin() + rt.goal_idx);
    rt.goals = build_rescue_route(rt.route, sc_.mission->safe_zone);
    if (!rebuild_path_for_goal(rt, t)) return;
  }
}

bool Simulator::inside_burning_cell(Vec3 p) const {
  if (!has_fire_ || !ignited_) return false;
  const int i = static_cast<int>(std::floor((p.x - grid_.origin.x) / grid_.cell));
  const int j = static_cast<int>(std::floor((p.y - grid_.origin.y) / grid_.cell));
  const int k = static_cast<int>(std::floor((p.z - grid_.origin.z) / grid_.cell));
  return grid_.in_grid(i, j, k) && grid_.burning(grid_.index(i, j, k));
}

double Simulator::clearance_at(const AgentRt& rt, Vec3 p) const {
  const bool with_terrain =
      rt.spec.type == AgentType::Body3D && world_.terrain_is_obstacle;
  double c = min_clearance(p, world_, with_terrain);
  if (inside_burning_cell(p)) c = 0.0;
  return c;
}

void Simulator::init() {
  agents_.clear();
  for (const AgentSpec& spec : sc_.agents) {
    AgentRt rt;
    rt.spec = spec;
    rt.met.agent_id = spec.id;
    if (spec.type == AgentType::Body3D) {
      rt.body.e = spec.start;
      rt.body.a = spec.orientation;
    } else {
      rt.uni.p = spec.start.xy();
      rt.uni.theta = spec.heading;
      rt.z = spec.start.z;
      if (spec.type == AgentType::Ugv && world_.terrain &&
          world_.terrain->contains(spec.start.x, spec.start.y)) {
        rt.z = world_.terrain->height(spec.start.x, spec.start.y);
      }
    }
    rt.goals = spec.goals;
    agents_.push_back(std::move(rt));
  }
  std::sort(agents_.begin(), agents_.end(),
            [](const AgentRt& a, const AgentRt& b) { return a.spec.id < b.spec.id; });

  if (sc_.fire) {
    const FireSpec& f = *sc_.fire;
    grid_ = make_fire_grid(f.nx, f.ny, f.nz, f.cell, f.origin, f.t_trigger, f.kappa, f.rho);
    wind_ = WindField{f.wind, f.intensity_scale};
    has_fire_ = true;
    world_.obstacles.push_back(Obstacle{kFireObstacleId, CloudObs{}, {}});
    fire_obstacle_ = world_.obstacles.size() - 1;
    snap_every_ = std::max(1, static_cast<int>(std::lround(5.0 / dt_)));
  }
}

void Simulator::fire_update(int n, double t) {
  if (!has_fire_) return;
  const FireSpec& f = *sc_.fire;
  if (ignited_ && n > 0) step_fire(grid_, wind_, dt_);
  if (!ignited_ && t >= f.start_time - kTimeEps) {
    ignite(grid_, f.ignition[0], f.ignition[1], f.ignition[2], f.t0);
    ignited_ = true;
  }
  if (!ignited_) return;

  const FireBoundary boundary = burning_boundary(grid_);
  const std::vector<Vec3> vel = boundary_velocities(boundary, prev_boundary_, dt_);
  world_.obstacles[fire_obstacle_].shape = CloudObs{boundary.points, vel};

  if (!fire_seen_ && !boundary.points.empty()) {
    fire_seen_ = true;
    reassign_step_ = n + 1;  // detections turn into assignments on the next step
  }
  if (n == reassign_step_) reassign_rescues(boundary.points, t);
  prev_boundary_ = boundary.points;

  if (n % snap_every_ == 0 && !boundary.points.empty()) {
    result_.fire_snapshots.push_back(boundary.points);
    result_.fire_snapshot_times.push_back(t);
  }
}

void Simulator::advance_world(int n) {
  if (n == 0) return;
  for (Obstacle& ob : world_.obstacles) {
    if (ob.id == kFireObstacleId) continue;  // front motion comes from the grid
    advance_obstacle(ob, dt_);
  }
}

void Simulator::log_sample(AgentRt& rt, double t, Mode mode, double v, double u,
                           double clearance) {
  const std::size_t idx = static_cast<std::size_t>(&rt - agents_.data());
  TrajectorySample s;
  s.t = t;
  s.pos = rt.position();
  s.heading = rt.heading_angle();
  s.mode = mode;
  s.v = v;
  s.u = u;
  s.min_clearance = clearance;
  result_.trajectories[idx].push_back(s);
  rt.met.min_clearance = std::min(rt.met.min_clearance, clearance);
}

bool Simulator::agent_step(AgentRt& rt, double t) {
  const Vec3 pos = rt.position();
  const double clearance = clearance_at(rt, pos);

  if (rt.done) {
    log_sample(rt, t, Mode::Tracking, 0.0, 0.0, clearance);
    return true;
  }

  // --- sense the already-updated world -------------------------------------
  const std::vector<SensorReading> readings =
      rt.spec.type == AgentType::Body3D
          ? sense_3d(pos, rt.body.a, world_, rt.spec.sensor_range)
          : sense_planar(rt.uni.p, rt.z, world_, rt.spec.sensor_range);
  const SensorReading* nearest = readings.empty() ? nullptr : &readings.front();

  // --- candidate avoidance command ------------------------------------------
  std::optional<AvoidCmd> cand;
  bool too_fast = false;
  if (nearest) {
    const std::optional<int> committed =
        rt.exec.mode == Mode::Avoiding ? rt.exec.committed_side : std::nullopt;
    try {
      if (rt.spec.type == AgentType::Body3D) {
        const Avoidance3D a3 = avoid_3d(rt.body, *nearest, rt.spec.reactive, rt.spec.limits,
                                        committed);
        cand = AvoidCmd{a3.side, a3.v, a3.turn_rate, a3.u, a3.v_gamma};
      } else {
        const UnicycleState flat{rt.uni.p, rt.uni.theta};
        const Avoidance2D a2 = avoid_2d(flat, *nearest, rt.spec.reactive, rt.spec.limits,
                                        committed);
        cand = AvoidCmd{a2.side, a2.v, a2.u, {0.0, 0.0, a2.u},
                        {a2.v_gamma.x, a2.v_gamma.y, 0.0}};
      }
    } catch (const ObstacleTooFastError&) {
      too_fast = true;
    } catch (const DegeneratePlaneError&) {
      cand.reset();  // dead-ahead reading that cannot span a plane: keep tracking
    }
  }
  if (too_fast && rt.exec.mode == Mode::Avoiding) {
    log_sample(rt, t, Mode::Avoiding, 0.0, 0.0, clearance);
    fail(SimStatus::MissionFailed, "agent " + std::to_string(rt.spec.id) +
                                       ": obstacle faster than the vehicle at t = " +
                                       std::to_string(t));
    return false;
  }

  // --- tracking command toward the active waypoint --------------------------
  Vec3 target = active_waypoint(rt);
  TrackCommand2D track2;
  TrackCommand3D track3;
  const bool planar = rt.spec.type != AgentType::Body3D;
  if (planar) {
    track2 = track_target(rt.uni.p, rt.uni.theta, target.xy(), rt.spec.reactive, rt.spec.limits);
  } else {
    track3 = track_target_3d(rt.body.e, rt.body.a, target, rt.spec.reactive, rt.spec.limits);
  }

  // --- executive -------------------------------------------------------------
  ExecTelemetry tel;
  tel.obstacle_distance = nearest ? nearest->dist : std::numeric_limits<double>::infinity();
  tel.distance_rate = (nearest && rt.prev_dist_valid)
                          ? (nearest->dist - rt.prev_dist) / dt_
                          : 0.0;
  tel.theta_fix = planar ? track2.theta_fix : track3.theta_fix;
  tel.dist_to_waypoint =
      planar ? distance(rt.uni.p, target.xy()) : distance(rt.body.e, target);
  // The feasibility probe is the turn a moving boundary demands: the slew rate
  // of the escape direction between consecutive readings of the same obstacle.
  // (The saturated turn command says nothing — it is at the limit by
  // construction, and a static boundary never demands a turn that swinging
  // wide cannot absorb.) A deforming or fast-closing boundary, though, can
  // swing the escape course faster than the vehicle can follow, and that is
  // what forces a replan.
  double demanded_rate = 0.0;
  if (cand && norm(cand->v_gamma) > 1e-12) {
    const Vec3 dir = normalized(cand->v_gamma);
    if (rt.prev_escape_valid && nearest && rt.prev_escape_obstacle == nearest->obstacle_id &&
        norm(nearest->surface_velocity) > 1e-12) {
      demanded_rate =
          std::acos(std::clamp(dot(rt.prev_escape, dir), -1.0, 1.0)) / dt_;
    }
    rt.prev_escape = dir;
    rt.prev_escape_obstacle = nearest ? nearest->obstacle_id : 0;
    rt.prev_escape_valid = true;
  } else {
    rt.prev_escape_valid = false;
  }
  tel.turn_radius = cand ? required_turn_radius(cand->v, demanded_rate)
                         : std::numeric_limits<double>::infinity();
  tel.candidate_side = cand ? cand->side : 1;
  tel.planner_available =
      sc_.planner.mode == PlannerMode::Hybrid && rt.spec.role != AgentRole::Coverage;
  tel.r_min = rt.spec.limits.r_min();

  const Mode mode_before = rt.exec.mode;
  ExecDirectives dir = exec_update(rt.exec, tel, rt.spec.exec, dt_);

  rt.prev_dist = nearest ? nearest->dist : std::numeric_limits<double>::infinity();
  rt.prev_dist_valid = nearest != nullptr;

  // A long boundary-following episode can leave the active waypoint behind the
  // vehicle; resuming toward it would retrace the detour. Rejoin the plan at
  // the nearest waypoint ahead that the vehicle can reach in a straight line.
  if (mode_before == Mode::Avoiding && rt.exec.mode == Mode::Tracking &&
      rt.path.size() > 1) {
    const CollisionChecker vis(world_, 0.0, 0.5);
    const int last = static_cast<int>(rt.path.size()) - 1;
    int best = std::clamp(rt.exec.waypoint, 0, last);
    double best_d = distance(pos, rt.path[static_cast<std::size_t>(best)]);
    for (int i = best + 1; i <= last; ++i) {
      const double d = distance(pos, rt.path[static_cast<std::size_t>(i)]);
      if (d < best_d && vis.segment_free(pos, rt.path[static_cast<std::size_t>(i)])) {
        best = i;
        best_d = d;
      }
    }
    rt.exec.waypoint = best;
  }

  // --- waypoint / goal bookkeeping -------------------------------------------
  if (rt.exec.waypoint >= static_cast<int>(rt.path.size())) {
    ++rt.goal_idx;
    if (rt.goal_idx >= rt.goals.size()) {
      rt.done = true;
      rt.done_time = t;
      rt.met.reached = true;
      rt.met.completion_time = t;
      log_sample(rt, t, rt.exec.mode, 0.0, 0.0, clearance);
      return true;
    }
    if (!rebuild_path_for_goal(rt, t)) {
      log_sample(rt, t, rt.exec.mode, 0.0, 0.0, clearance);
      return false;
    }
  }

  // --- infeasibility replanning ----------------------------------------------
  if (dir.replan) {
    const Vec3 goal = rt.goals[rt.goal_idx];
    Path corridor;
    corridor.push_back(pos);
    for (std::size_t i =
             std::min(static_cast<std::size_t>(std::max(rt.exec.waypoint, 0)),
                      rt.path.size() - 1);
         i < rt.path.size(); ++i) {
      corridor.push_back(rt.path[i]);
    }
    try {
      Path fresh = plan_to(rt, pos, goal, &corridor);
      rt.path = std::move(fresh);
      rt.exec.mode = Mode::Tracking;
      rt.exec.avoid_timer = -1.0;
      rt.exec.committed_side.reset();
      rt.exec.entry_armed = true;  // fresh path; a closing obstacle must re-engage
      rt.exec.waypoint = rt.path.size() > 1 ? 1 : 0;
      ++rt.met.replans;
      result_.replan_times.push_back(t);
    } catch (const StartOrGoalBlockedError&) {
      // Mid-avoidance the vehicle can sit inside the planner's inflation
      // margin; keep following the boundary and let the cooldown retry.
      if (!inside_bounds(world_.bounds, goal) ||
          obstacle_clearance(world_, goal) <= sc_.planner.rrt.clearance) {
        log_sample(rt, t, rt.exec.mode, 0.0, 0.0, clearance);
        fail(SimStatus::MissionFailed, "agent " + std::to_string(rt.spec.id) +
                                           ": goal unreachable at t = " + std::to_string(t));
        return false;
      }
    } catch (const NoPathFoundError&) {
      log_sample(rt, t, rt.exec.mode, 0.0, 0.0, clearance);
      fail(SimStatus::MissionFailed, "agent " + std::to_string(rt.spec.id) +
                                         ": no path around the hazard at t = " +
                                         std::to_string(t));
      return false;
    }
  }

  // --- command selection -------------------------------------------------
  // The executive may have advanced the waypoint or swapped the path above;
  // aim the tracking command at the final choice.
  target = active_waypoint(rt);
  if (planar) {
    track2 = track_target(rt.uni.p, rt.uni.theta, target.xy(), rt.spec.reactive,
                          rt.spec.limits);
  } else {
    track3 = track_target_3d(rt.body.e, rt.body.a, target, rt.spec.reactive, rt.spec.limits);
  }

  double v_cmd, u_scalar;
  Vec3 u_vec;
  if (rt.exec.mode == Mode::Avoiding && cand) {
    v_cmd = cand->v;
    u_scalar = cand->rate;
    u_vec = cand->u3;
  } else if (planar) {
    v_cmd = track2.v;
    u_scalar = track2.u;
    u_vec = {0.0, 0.0, track2.u};
  } else {
    v_cmd = track3.v;
    u_scalar = norm(track3.u);
    u_vec = track3.u;
  }

  log_sample(rt, t, rt.exec.mode, v_cmd, u_scalar, clearance);
  if (clearance <= 0.0) {
    fail(SimStatus::SafetyViolation, "agent " + std::to_string(rt.spec.id) +
                                         ": contact at t = " + std::to_string(t));
    return false;
  }

  // --- integrate -------------------------------------------------------------
  const Vec3 before = rt.position();
  const double heading_before = rt.heading_angle();
  const Vec3 a_before = rt.body.a;
  try {
    if (rt.spec.type == AgentType::Unicycle) {
      rt.uni = step_unicycle(rt.uni, v_cmd, u_scalar, rt.spec.limits, dt_);
    } else if (rt.spec.type == AgentType::Ugv) {
      UgvState s{rt.uni.p, rt.uni.theta, rt.z};
      const double flat_z = rt.z;
      const UgvState moved = world_.terrain
                                 ? step_ugv(s, v_cmd, u_scalar, rt.spec.limits,
                                            [&](double x, double y) {
                                              return world_.terrain->height(x, y);
                                            },
                                            dt_)
                                 : step_ugv(s, v_cmd, u_scalar, rt.spec.limits,
                                            [&](double, double) { return flat_z; }, dt_);
      rt.uni.p = moved.p;
      rt.uni.theta = moved.theta;
      rt.z = moved.z;
    } else {
      rt.body = step_body3d(rt.body, v_cmd, u_vec, rt.spec.limits, dt_);
    }
  } catch (const OutOfBoundsError&) {
    fail(SimStatus::MissionFailed, "agent " + std::to_string(rt.spec.id) +
                                       ": left the mapped terrain at t = " +
                                       std::to_string(t));
    return false;
  } catch (const LimitViolationError& e) {
    fail(SimStatus::MissionFailed,
         "agent " + std::to_string(rt.spec.id) + ": " + e.what());
    return false;
  }

  const Vec3 after = rt.position();
  rt.met.path_length += distance(before, after);
  if (rt.spec.type == AgentType::Body3D) {
    const double c = std::clamp(dot(a_before, rt.body.a), -1.0, 1.0);
    rt.met.turn_effort += std::acos(c);
  } else {
    rt.met.turn_effort += std::abs(wrap_angle(rt.heading_angle() - heading_before));
  }
  if (!inside_bounds(world_.bounds, after)) {
    fail(SimStatus::MissionFailed, "agent " + std::to_string(rt.spec.id) +
                                       ": left the world bounds at t = " +
                                       std::to_string(t));
    return false;
  }
  return true;
}

SimResult Simulator::run() {
  init();
  result_.trajectories.assign(agents_.size(), {});

  // The fire can already be burning at t = 0: ignite before mission
  // composition and initial planning so both see the hazard.
  fire_update(0, 0.0);
  compose_mission();
  for (AgentRt& rt : agents_) {
    if (rt.goals.empty()) {
      // Mission roles may legitimately end up with nothing to do.
      rt.done = true;
      rt.met.reached = true;
      continue;
    }
    if (!stopped_ && !rebuild_path_for_goal(rt, 0.0)) break;
  }

  int n = 0;
  if (!stopped_) {
    for (;; ++n) {
      const double t = n * dt_;
      if (t > sc_.sim.t_max + kTimeEps) {
        status_ = SimStatus::Timeout;
        result_.message = "time limit reached";
        end_time_ = sc_.sim.t_max;
        break;
      }
      if (n > 0) fire_update(n, t);
      advance_world(n);
      if (stopped_) {  // a reassignment replan can fail
        end_time_ = t;
        break;
      }

      bool failed = false;
      for (AgentRt& rt : agents_) {
        if (!agent_step(rt, t)) {
          failed = true;
          break;
        }
      }
      if (failed) {
        end_time_ = t;
        break;
      }

      bool all_done = true;
      for (const AgentRt& rt : agents_) all_done &= rt.done;
      if (all_done) {
        status_ = SimStatus::GoalReached;
        end_time_ = 0.0;
        for (const AgentRt& rt : agents_) end_time_ = std::max(end_time_, rt.done_time);
        break;
      }
    }
  }

  result_.status = status_;
  result_.metrics.mission_time = end_time_;
  for (AgentRt& rt : agents_) {
    if (!rt.met.reached) rt.met.completion_time = end_time_;
    result_.metrics.path_length += rt.met.path_length;
    result_.metrics.turn_effort += rt.met.turn_effort;
    result_.metrics.replans += rt.met.replans;
    result_.metrics.min_clearance =
        std::min(result_.metrics.min_clearance, rt.met.min_clearance);
    result_.agent_metrics.push_back(rt.met);
    result_.planned_paths.push_back(rt.path);
  }
  if (sc_.mission && sc_.mission->has_energy) {
    double total = 0.0;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      std::vector<Vec3> ps;
      ps.reserve(result_.trajectories[i].size());
      for (const TrajectorySample& s : result_.trajectories[i]) ps.push_back(s.pos);
      if (ps.size() >= 2) total += trajectory_energy(ps, dt_, sc_.mission->energy);
    }
    result_.metrics.energy = total;
  }
  return result_;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MissionPlan compose_mission_plan(const Scenario& sc) {
  MissionPlan plan;
  if (!sc.mission) return plan;
  const MissionSpec& m = *sc.mission;
  const int k = m.partitions;

  // Partition the ground into k regions: k-means over a uniform cell grid,
  // clusters relabelled south-to-north / west-to-east so the assignment does
  // not depend on seeding order.
  const WorldBounds& b = sc.world.bounds;
  const double ex = b.max.x - b.min.x;
  const double ey = b.max.y - b.min.y;
  const double h = std::max(0.5, std::max(ex, ey) / 50.0);
  std::vector<Vec2> cells;
  for (double y = b.min.y + h / 2.0; y < b.max.y; y += h) {
    for (double x = b.min.x + h / 2.0; x < b.max.x; x += h) {
      cells.push_back({x, y});
    }
  }
  const KmeansResult km = kmeans_partition(cells, k, sc.sim.seed);

  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int c) {
    const Vec2& ca = km.centroids[a];
    const Vec2& cc = km.centroids[c];
    if (ca.y != cc.y) return ca.y < cc.y;
    return ca.x < cc.x;
  });
  std::vector<int> slot_of(k);
  for (int s = 0; s < k; ++s) slot_of[order[s]] = s;

  std::vector<Vec2> lo(k, {std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()});
  std::vector<Vec2> hi(k, {-std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int s = slot_of[km.assignment[i]];
    lo[s].x = std::min(lo[s].x, cells[i].x);
    lo[s].y = std::min(lo[s].y, cells[i].y);
    hi[s].x = std::max(hi[s].x, cells[i].x);
    hi[s].y = std::max(hi[s].y, cells[i].y);
  }

  plan.regions.resize(k);
  plan.coverage_routes.resize(k);
  for (int s = 0; s < k; ++s) {
    GroundRect& rect = plan.regions[s];
    rect.min = {std::max(b.min.x, lo[s].x - h / 2.0), std::max(b.min.y, lo[s].y - h / 2.0)};
    const Vec2 top{std::min(b.max.x, hi[s].x + h / 2.0), std::min(b.max.y, hi[s].y + h / 2.0)};
    rect.size = top - rect.min;
    plan.coverage_routes[s] =
        lawnmower_waypoints(rect, m.footprint.radius(), m.footprint.altitude);
  }

  // Victims go to the region whose centroid they are closest to; within a
  // region the rescue order is set by proximity to the fire front at t = 0.
  plan.rescue_victims.resize(k);
  for (const Victim& v : m.victims) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int s = 0; s < k; ++s) {
      const double d = distance(v.pos.xy(), km.centroids[order[s]]);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    plan.rescue_victims[best].push_back(v);
  }
  std::vector<Vec3> boundary;
  if (sc.fire && sc.fire->start_time <= kTimeEps) {
    const FireSpec& f = *sc.fire;
    FireGrid g = make_fire_grid(f.nx, f.ny, f.nz, f.cell, f.origin, f.t_trigger, f.kappa,
                                f.rho);
    ignite(g, f.ignition[0], f.ignition[1], f.ignition[2], f.t0);
    boundary = burning_boundary(g).points;
  }
  plan.rescue_routes.resize(k);
  for (int s = 0; s < k; ++s) {
    plan.rescue_victims[s] = prioritize_victims(plan.rescue_victims[s], boundary);
    plan.rescue_routes[s] = build_rescue_route(plan.rescue_victims[s], m.safe_zone);
  }
  return plan;
}

SimResult simulate(const Scenario& scenario) {
  Simulator sim(scenario);
  return sim.run();
}

BatchSummary run_batch(const Scenario& base, std::uint64_t seed_lo, std::uint64_t seed_hi,
                       PlannerMode mode_a, PlannerMode mode_b) {
  if (seed_hi < seed_lo) throw std::invalid_argument("seeds: empty range");
  BatchSummary bs;
  bs.mode_a = mode_a;
  bs.mode_b = mode_b;

  for (std::uint64_t seed = seed_lo;; ++seed) {
    PairOutcome po;
    po.seed = seed;
    try {
      const Scenario variant = randomized_variant(base, seed);
      const auto run_mode = [&](PlannerMode m, bool& ok, Metrics& met, std::string& err) {
        Scenario s = variant;
        s.planner.mode = m;
        try {
          const SimResult r = simulate(s);
          ok = r.status == SimStatus::GoalReached;
          met = r.metrics;
          if (!ok) {
            err = to_string(r.status);
            if (!r.message.empty()) err += ": " + r.message;
          }
        } catch (const std::exception& e) {
          ok = false;
          err = e.what();
        }
      };
      run_mode(mode_a, po.a_ok, po.a, po.a_error);
      run_mode(mode_b, po.b_ok, po.b, po.b_error);
    } catch (const InvalidScenarioError& e) {
      po.a_error = po.b_error = e.what();
      bs.errors.push_back("seed " + std::to_string(seed) + ": " + e.what());
    }
    bs.outcomes.push_back(po);
    if (seed == seed_hi) break;
  }

  std::vector<double> len_gain, time_gain;
  for (const PairOutcome& po : bs.outcomes) {
    ++bs.pairs;
    if (po.a_ok && po.b_ok) {
      ++bs.both_ok;
      if (po.b.path_length > 0.0) {
        len_gain.push_back((po.b.path_length - po.a.path_length) / po.b.path_length);
      }
      if (po.b.mission_time > 0.0) {
        time_gain.push_back((po.b.mission_time - po.a.mission_time) / po.b.mission_time);
      }
      bs.a_wins += po.a.path_length < po.b.path_length && po.a.mission_time < po.b.mission_time;
    } else if (po.a_ok) {
      ++bs.a_wins;  // solved a pair the baseline could not
    }
  }
  bs.win_rate = bs.pairs > 0 ? static_cast<double>(bs.a_wins) / bs.pairs : 0.0;
  bs.median_length_gain = median(len_gain);
  bs.median_time_gain = median(time_gain);
  return bs;
}

}  // namespace firenav
