#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "firenav/io.hpp"
#include "firenav/scenario.hpp"
#include "firenav/sim.hpp"

namespace fs = std::filesystem;
using namespace firenav;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;  // invalid scenario or invocation; nothing was run
constexpr int kFailedRun = 2; // the run ended in anything but GoalReached

int report_issues(const InvalidScenarioError& e) {
  for (const std::string& line : e.issues) std::cerr << line << "\n";
  return kBadInput;
}

// Seed overrides reuse the batch semantics: re-seed the planner and the run,
// and apply the scenario's randomize block if it has one.
Scenario load_with_seed(const std::string& path, const std::optional<std::uint64_t>& seed) {
  Scenario s = load_scenario(path);
  if (seed) s = randomized_variant(s, *seed);
  return s;
}

RunRecord record_for(const Scenario& s, const SimResult& r) {
  RunRecord rec;
  rec.bounds = s.world.bounds;
  rec.obstacles = s.world.obstacles;
  rec.d_eps = std::numeric_limits<double>::infinity();
  for (const AgentSpec& a : s.agents) rec.d_eps = std::min(rec.d_eps, a.exec.d_eps);
  if (!std::isfinite(rec.d_eps)) rec.d_eps = 1.0;
  rec.fire_snapshots = r.fire_snapshots;
  rec.fire_snapshot_times = r.fire_snapshot_times;
  rec.planned_paths = r.planned_paths;
  return rec;
}

std::string traj_name(int agent_id) {
  return "trajectory_" + std::to_string(agent_id) + ".csv";
}

void write_run_outputs(const fs::path& out, const Scenario& s, const SimResult& r) {
  fs::create_directories(out);
  for (std::size_t i = 0; i < r.trajectories.size(); ++i) {
    const int id = r.agent_metrics[i].agent_id;
    write_trajectory_csv((out / traj_name(id)).string(), id, r.trajectories[i]);
  }
  write_metrics((out / "metrics.txt").string(), r);
  write_run_record((out / "run_record.json").string(), record_for(s, r));
}

std::vector<TrajectoryFile> read_output_dir(const fs::path& out) {
  std::vector<std::pair<int, fs::path>> found;
  const std::regex name_re("^trajectory_(-?[0-9]+)\\.csv$");
  if (!fs::is_directory(out)) throw MissingDataError("not a directory: " + out.string());
  for (const fs::directory_entry& e : fs::directory_iterator(out)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (std::regex_match(name, m, name_re)) found.push_back({std::stoi(m[1]), e.path()});
  }
  if (found.empty()) throw MissingDataError("no trajectory files in " + out.string());
  std::sort(found.begin(), found.end());
  std::vector<TrajectoryFile> tfs;
  tfs.reserve(found.size());
  for (const auto& [id, p] : found) tfs.push_back(read_trajectory_csv(p.string()));
  return tfs;
}

void write_waypoints_csv(const fs::path& path, const std::vector<Vec3>& pts) {
  std::ofstream f(path);
  if (!f) throw MissingDataError("cannot write " + path.string());
  f << "x,y,z\n";
  for (const Vec3& p : pts) {
    f << format_float(p.x) << ',' << format_float(p.y) << ',' << format_float(p.z)
      << "\n";
  }
}

bool parse_seed_range(const std::string& text, std::uint64_t& lo, std::uint64_t& hi) {
  const std::regex re("^([0-9]+)\\.\\.([0-9]+)$");
  std::smatch m;
  if (!std::regex_match(text, m, re)) return false;
  lo = std::stoull(m[1]);
  hi = std::stoull(m[2]);
  return lo <= hi;
}

bool parse_mode(const std::string& name, PlannerMode& mode) {
  if (name == "hybrid") mode = PlannerMode::Hybrid;
  else if (name == "reactive") mode = PlannerMode::Reactive;
  else return false;
  return true;
}

int run_validate(const std::string& scenario_path) {
  const Scenario s = load_scenario(scenario_path);  // throws with all issues
  std::cout << "ok: " << s.name << " (" << s.agents.size() << " agent"
            << (s.agents.size() == 1 ? "" : "s") << ")\n";
  return kOk;
}

int run_simulate(const std::string& scenario_path, const std::string& out,
                 const std::optional<std::uint64_t>& seed, const std::string& format) {
  const Scenario s = load_with_seed(scenario_path, seed);
  const SimResult r = simulate(s);
  if (format != "summary") {
    if (out.empty()) {
      std::cerr << "out: required unless --format summary\n";
      return kBadInput;
    }
    write_run_outputs(out, s, r);
    if (format == "svg") {
      const RunRecord rec = record_for(s, r);
      write_topdown_svg((fs::path(out) / "plot_topdown.svg").string(), rec,
                        read_output_dir(out));
      write_clearance_svg((fs::path(out) / "plot_clearance.svg").string(), rec,
                          read_output_dir(out));
    }
  }
  std::cout << s.name << ": " << to_string(r.status);
  if (!r.message.empty()) std::cout << " (" << r.message << ")";
  std::cout << "  time " << format_float(r.metrics.mission_time) << " s, path "
            << format_float(r.metrics.path_length) << " m, min clearance "
            << format_float(r.metrics.min_clearance) << " m, replans "
            << r.metrics.replans << "\n";
  return r.status == SimStatus::GoalReached ? kOk : kFailedRun;
}

int run_plan(const std::string& scenario_path, const std::string& out,
             const std::optional<std::uint64_t>& seed) {
  const Scenario s = load_with_seed(scenario_path, seed);
  if (!out.empty()) fs::create_directories(out);

  std::vector<Vec3> hazard;
  if (s.fire) {
    const FireSpec& f = *s.fire;
    FireGrid g = make_fire_grid(f.nx, f.ny, f.nz, f.cell, f.origin, f.t_trigger, f.kappa,
                                f.rho);
    ignite(g, f.ignition[0], f.ignition[1], f.ignition[2], f.t0);
    hazard = burning_boundary(g).points;
  }

  bool planned_any = false;
  for (const AgentSpec& a : s.agents) {
    if (a.role != AgentRole::Navigate || a.goals.empty()) continue;
    planned_any = true;
    RrtParams params = s.planner.rrt;
    params.planar = a.type != AgentType::Body3D;
    const int n = std::max(1, s.planner.candidates);
    std::vector<Path> candidates;
    for (int c = 0; c < n; ++c) {
      params.seed = s.planner.rrt.seed + 1000ULL * static_cast<std::uint64_t>(c) +
                    static_cast<std::uint64_t>(a.id);
      candidates.push_back(plan_pipeline(s.world, a.start, a.goals.front(), params));
    }
    std::size_t best = 0;
    if (candidates.size() > 1) {
      const std::vector<double> costs =
          total_cost(candidates, s.planner.weights, hazard.empty() ? nullptr : &hazard);
      best = std::min_element(costs.begin(), costs.end()) - costs.begin();
    }
    const Path& path = candidates[best];
    std::cout << "agent " << a.id << ": " << path.size() << " waypoints, length "
              << format_float(path_length_l2(path)) << " m\n";
    if (!out.empty()) {
      write_waypoints_csv(fs::path(out) / ("path_" + std::to_string(a.id) + ".csv"),
                          path);
    }
  }
  if (!planned_any) {
    std::cerr << "agents: no navigate agent with a goal to plan for\n";
    return kBadInput;
  }
  return kOk;
}

int run_batch_cmd(const std::string& scenario_path, const std::string& out,
                  const std::string& seeds, const std::string& compare) {
  std::uint64_t lo = 0, hi = 0;
  if (!parse_seed_range(seeds, lo, hi)) {
    std::cerr << "seeds: expected <lo>..<hi> with lo <= hi\n";
    return kBadInput;
  }
  const std::size_t comma = compare.find(',');
  PlannerMode mode_a, mode_b;
  if (comma == std::string::npos || !parse_mode(compare.substr(0, comma), mode_a) ||
      !parse_mode(compare.substr(comma + 1), mode_b)) {
    std::cerr << "compare: expected <mode>,<mode> with modes hybrid|reactive\n";
    return kBadInput;
  }
  const Scenario s = load_scenario(scenario_path);
  const BatchSummary summary = run_batch(s, lo, hi, mode_a, mode_b);
  std::cout << batch_summary_text(summary);
  if (!out.empty()) {
    fs::create_directories(out);
    write_batch_summary((fs::path(out) / "batch_summary.txt").string(), summary);
  }
  return kOk;
}

int run_fire(const std::string& scenario_path, const std::string& out,
             const std::string& format) {
  const Scenario s = load_scenario(scenario_path);
  if (!s.fire) {
    std::cerr << "fire: scenario has no fire block\n";
    return kBadInput;
  }
  const FireSpec& f = *s.fire;
  FireGrid g = make_fire_grid(f.nx, f.ny, f.nz, f.cell, f.origin, f.t_trigger, f.kappa,
                              f.rho);
  ignite(g, f.ignition[0], f.ignition[1], f.ignition[2], f.t0);
  const WindField wind{f.wind, f.intensity_scale};

  std::ofstream csv;
  if (format != "summary") {
    if (out.empty()) {
      std::cerr << "out: required unless --format summary\n";
      return kBadInput;
    }
    fs::create_directories(out);
    csv.open(fs::path(out) / "fire_front.csv");
    csv << "t,x,y,z\n";
  }

  const double dt = s.sim.dt;
  const int steps = static_cast<int>(s.sim.t_max / dt + 0.5);
  const int snap_every = std::max(1, static_cast<int>(5.0 / dt + 0.5));
  for (int n = 0; n <= steps; ++n) {
    if (n > 0) step_fire(g, wind, dt);
    if (n % snap_every != 0 && n != steps) continue;
    const double t = n * dt;
    const FireBoundary front = burning_boundary(g);
    int burning = 0;
    for (double temp : g.temp) burning += temp > g.t_trigger;
    std::cout << "t=" << format_float(t) << " s: " << burning << " burning cells, "
              << front.points.size() << " boundary points\n";
    if (csv.is_open()) {
      for (const Vec3& p : front.points) {
        csv << format_float(t) << ',' << format_float(p.x) << ',' << format_float(p.y)
            << ',' << format_float(p.z) << "\n";
      }
    }
  }
  return kOk;
}

int run_coverage(const std::string& scenario_path, const std::string& out) {
  const Scenario s = load_scenario(scenario_path);
  if (!s.mission) {
    std::cerr << "mission: scenario has no mission block\n";
    return kBadInput;
  }
  const MissionPlan plan = compose_mission_plan(s);
  if (!out.empty()) fs::create_directories(out);
  for (std::size_t i = 0; i < plan.regions.size(); ++i) {
    const GroundRect& r = plan.regions[i];
    std::cout << "partition " << i << ": region [" << format_float(r.min.x) << ", "
              << format_float(r.min.y) << "] size [" << format_float(r.size.x) << ", "
              << format_float(r.size.y) << "], " << plan.coverage_routes[i].size()
              << " sweep waypoints";
    if (!plan.rescue_victims[i].empty()) {
      std::cout << ", victims";
      for (const Victim& v : plan.rescue_victims[i]) std::cout << ' ' << v.id;
    }
    std::cout << "\n";
    if (!out.empty()) {
      write_waypoints_csv(
          fs::path(out) / ("coverage_route_" + std::to_string(i) + ".csv"),
          plan.coverage_routes[i]);
      if (!plan.rescue_routes[i].empty()) {
        write_waypoints_csv(
            fs::path(out) / ("rescue_route_" + std::to_string(i) + ".csv"),
            plan.rescue_routes[i]);
      }
    }
  }
  return kOk;
}

int run_plot(const std::string& out) {
  const RunRecord rec = read_run_record((fs::path(out) / "run_record.json").string());
  const std::vector<TrajectoryFile> tfs = read_output_dir(out);
  write_topdown_svg((fs::path(out) / "plot_topdown.svg").string(), rec, tfs);
  write_clearance_svg((fs::path(out) / "plot_clearance.svg").string(), rec, tfs);
  std::cout << "wrote plot_topdown.svg and plot_clearance.svg in " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario toolkit: validation, planning, simulation, batches, plots"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, format = "csv", seeds, compare = "hybrid,reactive";
  std::optional<std::uint64_t> seed;

  const auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  const auto add_out = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--out", out_dir, "output directory");
    if (required) opt->required();
  };
  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "csv (files), svg (files + plots), summary")
        ->check(CLI::IsMember({"csv", "svg", "summary"}));
  };

  CLI::App* validate = app.add_subcommand("validate", "check a scenario, write nothing");
  add_scenario(validate);

  CLI::App* plan = app.add_subcommand("plan", "run the global planner only");
  add_scenario(plan);
  add_out(plan, false);
  plan->add_option("--seed", seed, "override planner/run seed");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run a scenario to completion");
  add_scenario(simulate_cmd);
  add_out(simulate_cmd, false);
  simulate_cmd->add_option("--seed", seed, "override planner/run seed");
  add_format(simulate_cmd);

  CLI::App* batch = app.add_subcommand("batch", "paired-seed planner comparison");
  add_scenario(batch);
  add_out(batch, false);
  batch->add_option("--seeds", seeds, "seed range <lo>..<hi>")->required();
  batch->add_option("--compare", compare, "two planner modes, e.g. hybrid,reactive");

  CLI::App* fire = app.add_subcommand("fire", "step the fire model on its own");
  add_scenario(fire);
  add_out(fire, false);
  add_format(fire);

  CLI::App* coverage = app.add_subcommand("coverage", "partition, sweeps and rescue routes");
  add_scenario(coverage);
  add_out(coverage, false);

  CLI::App* plot = app.add_subcommand("plot", "render plots from a prior output directory");
  plot->add_option("--out", out_dir, "directory with run outputs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return run_validate(scenario_path);
    if (*plan) return run_plan(scenario_path, out_dir, seed);
    if (*simulate_cmd) return run_simulate(scenario_path, out_dir, seed, format);
    if (*batch) return run_batch_cmd(scenario_path, out_dir, seeds, compare);
    if (*fire) return run_fire(scenario_path, out_dir, format);
    if (*coverage) return run_coverage(scenario_path, out_dir);
    if (*plot) return run_plot(out_dir);
  } catch (const InvalidScenarioError& e) {
    return report_issues(e);
  } catch (const MissingDataError& e) {
    std::cerr << "missing data: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailedRun;
  }
  return kBadInput;
}
