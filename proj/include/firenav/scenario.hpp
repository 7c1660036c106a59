#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "firenav/coverage.hpp"
#include "firenav/executive.hpp"
#include "firenav/planner.hpp"
#include "firenav/reactive.hpp"
#include "firenav/vehicles.hpp"
#include "firenav/world.hpp"

namespace firenav {

// Carries every problem found in a scenario file, one "field: message" line
// per issue, so a caller can report all of them at once.
struct InvalidScenarioError : std::runtime_error {
  std::vector<std::string> issues;

  explicit InvalidScenarioError(std::vector<std::string> lines)
      : std::runtime_error(lines.empty() ? "invalid scenario" : lines.front()),
        issues(std::move(lines)) {}
};

enum class AgentType { Unicycle, Body3D, Ugv };

// What the agent is in the scenario for. Navigate agents drive to their
// listed goals; coverage agents sweep their assigned region partition;
// rescue agents visit assigned victims and then the safe zone.
enum class AgentRole { Navigate, Coverage, Rescue };

struct AgentSpec {
  int id = 0;
  AgentType type = AgentType::Unicycle;
  AgentRole role = AgentRole::Navigate;
  Vec3 start;
  double heading = 0.0;           // unicycle / ugv yaw at t = 0
  Vec3 orientation{1.0, 0.0, 0.0};  // body3d orientation at t = 0
  std::vector<Vec3> goals;
  VehicleLimits limits{4.0, 2.0};
  double sensor_range = 10.0;
  ReactiveConfig reactive;
  ExecConfig exec;
};

struct FireSpec {
  int nx = 1, ny = 1, nz = 1;
  double cell = 1.0;
  Vec3 origin;
  int ignition[3] = {0, 0, 0};
  double t0 = 100.0;        // temperature injected at the ignition cell
  double t_trigger = 50.0;
  double kappa = 0.05;
  double rho = 1.0;
  Vec3 wind;
  double intensity_scale = 1.0;
  double start_time = 0.0;  // sim time at which the ignition happens
};

enum class PlannerMode { Reactive, Hybrid };

struct PlannerSpec {
  PlannerMode mode = PlannerMode::Reactive;
  RrtParams rrt;
  CostWeights weights;
  int candidates = 1;  // plans scored per (re)planning event
};

struct MissionSpec {
  int partitions = 1;
  Vec3 safe_zone;
  std::vector<Victim> victims;
  SensorFootprint footprint;
  EnergyModel energy;
  bool has_energy = false;
};

// Per-seed perturbations applied by batch runs: uniform offsets drawn from
// [-jitter, +jitter] per axis, redrawn until the placement validates.
struct RandomizeSpec {
  double obstacle_jitter = 0.0;  // applied to obstacle positions (x, y)
  double goal_jitter = 0.0;      // applied to agent goals (x, y)
};

struct SimSpec {
  double dt = 0.1;
  double t_max = 60.0;
  std::uint64_t seed = 1;
};

struct Scenario {
  std::string name;
  World world;
  std::optional<FireSpec> fire;
  std::vector<AgentSpec> agents;
  PlannerSpec planner;
  std::optional<MissionSpec> mission;
  std::optional<RandomizeSpec> randomize;
  SimSpec sim;
};

// Reads and validates a scenario file. Throws InvalidScenarioError with every
// problem found; never returns a partially valid scenario.
Scenario load_scenario(const std::string& path);

// Same from an in-memory JSON document. `base_dir` resolves relative file
// references (terrain rasters).
Scenario parse_scenario(const std::string& json_text, const std::string& base_dir,
                        const std::string& default_name = "scenario");

// Semantic re-check of an already-built scenario (placement, ranges).
// Returns one "field: message" line per problem; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

// The scenario a batch run executes for one seed: the randomize block's
// jitters applied with a deterministic generator, redrawn (bounded retries)
// until placement validates, and the planner/sim seeds replaced by `seed`.
// Without a randomize block only the seeds change.
Scenario randomized_variant(const Scenario& s, std::uint64_t seed);

std::string to_string(AgentType t);
std::string to_string(AgentRole r);
std::string to_string(PlannerMode m);

}  // namespace firenav
