#ifndef GRIDNAV_PLANNER_HPP
#define GRIDNAV_PLANNER_HPP

#include <optional>
#include <vector>

#include "gridnav/costmap.hpp"
#include "gridnav/geometry.hpp"

namespace gridnav {

struct Path {
  std::vector<Point2> waypoints;  // cell centers, world frame
  double total_cost = 0.0;
};

struct VelocityCommand {
  double v = 0.0;      // m/s forward
  double omega = 0.0;  // rad/s yaw rate
};

struct PlanOptions {
  int connectivity = 8;  // 4 or 8
  uint8_t lethal_threshold = kLethalCost;
  uint8_t unknown_cost = 50;  // traversal cost assumed for UNKNOWN cells
  bool use_astar = false;
};

/// Minimum-cost grid path between the cells containing start and goal.
/// Step cost is step length (1 or sqrt(2) cells) scaled by
/// (1 + cell_cost / 25) of the entered cell; cells at or above the lethal
/// threshold are impassable. Ties break on (lower y, then lower x) so the
/// result is deterministic. Returns nullopt when the goal is unreachable.
std::optional<Path> plan_global(const OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                                const PlanOptions& opts = {});

/// True iff any waypoint of the path now sits on a cell at or above the
/// lethal threshold.
bool needs_replan(const Path& path, const OccupancyGrid& grid,
                  uint8_t lethal_threshold = kLethalCost);

/// Pure-pursuit style follower: steers toward the first waypoint at least
/// lookahead ahead of the nearest path point. omega = gain * heading error
/// (clamped); v = v_max * max(0, cos(heading error)).
VelocityCommand follow(const Path& path, const Pose2D& pose, double lookahead, double v_max,
                       double omega_max, double gain = 1.0);

}  // namespace gridnav

#endif
