#ifndef GRIDNAV_SCENARIO_HPP
#define GRIDNAV_SCENARIO_HPP

#include <optional>
#include <utility>
#include <vector>

#include "gridnav/scenario_config.hpp"

namespace gridnav {

enum class ScenarioOutcome { goal_reached, collision, timeout };

struct TrajectorySample {
  double t = 0.0;
  Pose2D pose;
};

struct ScenarioReport {
  ScenarioOutcome outcome = ScenarioOutcome::timeout;
  int ticks = 0;
  double sim_time = 0.0;
  int replan_count = 0;
  Pose2D final_pose;
  Path initial_path;
  std::vector<TrajectorySample> trajectory;
  /// Minimum distance from the robot center to each world box's ground
  /// footprint over the whole run, indexed like world.boxes.
  std::vector<double> min_clearance;
  std::vector<std::pair<int, OccupancyGrid>> snapshots;  // (tick, inflated master)
};

/// Runs the sense -> update layers -> compose + inflate -> plan -> follow ->
/// step loop until the goal, a collision, or the timeout. Deterministic for
/// a fixed config and seed. stop_after_ticks cuts the run short (used by
/// grid export).
ScenarioReport run_scenario(const ScenarioConfig& cfg,
                            std::optional<int> stop_after_ticks = std::nullopt);

/// The static layer: free inside the world bounds, lethal outside.
OccupancyGrid make_static_layer(const GridSpec& spec, const Bounds2D& bounds);

}  // namespace gridnav

#endif
