#include "gridnav/planner.hpp"

#include <algorithm>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace gridnav {

namespace {

struct QueueEntry {
  double priority;  // g (Dijkstra) or g + h (A*)
  CellIndex cell;
};

// Min-heap on priority; ties break on lower y, then lower x.
struct EntryGreater {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.cell.y != b.cell.y) return a.cell.y > b.cell.y;
    return a.cell.x > b.cell.x;
  }
};

constexpr int kStepX8[] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kStepY8[] = {0, 0, 1, -1, 1, -1, 1, -1};

}  // namespace

std::optional<Path> plan_global(const OccupancyGrid& grid, const Pose2D& start, const Pose2D& goal,
                                const PlanOptions& opts) {
  if (opts.connectivity != 4 && opts.connectivity != 8)
    throw std::invalid_argument("plan_global: connectivity must be 4 or 8");
  const auto start_cell = world_to_cell(grid.spec, start.x, start.y);
  const auto goal_cell = world_to_cell(grid.spec, goal.x, goal.y);
  if (!start_cell || !goal_cell) throw std::invalid_argument("plan_global: endpoint outside grid");

  const int w = grid.spec.width;
  const auto idx = [w](const CellIndex& c) { return static_cast<size_t>(c.y) * w + c.x; };

  const auto cell_weight = [&](const CellIndex& c) -> std::optional<double> {
    uint8_t cost = grid.at(c);
    if (cost == kUnknownCost) cost = opts.unknown_cost;
    if (cost >= opts.lethal_threshold) return std::nullopt;
    return 1.0 + cost / 25.0;
  };
  const auto lethal = [&](const CellIndex& c) {
    const uint8_t cost = grid.at(c) == kUnknownCost ? opts.unknown_cost : grid.at(c);
    return cost >= opts.lethal_threshold;
  };

  if (!cell_weight(*start_cell)) throw std::invalid_argument("plan_global: start cell is lethal");

  if (*start_cell == *goal_cell) {
    return Path{{grid.cell_center(*start_cell)}, 0.0};
  }

  const auto heuristic = [&](const CellIndex& c) {
    if (!opts.use_astar) return 0.0;
    // Euclidean distance in cells; admissible since every step weight >= 1.
    return std::hypot(c.x - goal_cell->x, c.y - goal_cell->y);
  };

  const size_t n = grid.cost.size();
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<int32_t> parent(n, -1);
  std::vector<bool> settled(n, false);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryGreater> open;

  g[idx(*start_cell)] = 0.0;
  open.push({heuristic(*start_cell), *start_cell});

  const int nsteps = opts.connectivity;
  bool found = false;
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    const size_t ci = idx(top.cell);
    if (settled[ci]) continue;
    settled[ci] = true;
    if (top.cell == *goal_cell) {
      found = true;
      break;
    }
    for (int s = 0; s < nsteps; ++s) {
      const CellIndex next{top.cell.x + kStepX8[s], top.cell.y + kStepY8[s]};
      if (!grid.in_bounds(next)) continue;
      const auto weight = cell_weight(next);
      if (!weight) continue;
      const bool diagonal = s >= 4;
      if (diagonal) {
        // Corner rule: a diagonal is blocked when both orthogonal neighbors
        // are lethal.
        const CellIndex o1{next.x, top.cell.y};
        const CellIndex o2{top.cell.x, next.y};
        if (lethal(o1) && lethal(o2)) continue;
      }
      const double step_len = diagonal ? std::numbers::sqrt2 : 1.0;
      const double cand = g[ci] + step_len * *weight;
      const size_t ni = idx(next);
      if (cand < g[ni]) {
        g[ni] = cand;
        parent[ni] = static_cast<int32_t>(ci);
        open.push({cand + heuristic(next), next});
      }
    }
  }

  if (!found) return std::nullopt;

  Path path;
  path.total_cost = g[idx(*goal_cell)];
  std::vector<CellIndex> cells;
  for (int32_t i = static_cast<int32_t>(idx(*goal_cell)); i >= 0; i = parent[i]) {
    cells.push_back({static_cast<int>(i % w), static_cast<int>(i / w)});
    if (cells.back() == *start_cell) break;
  }
  std::reverse(cells.begin(), cells.end());
  path.waypoints.reserve(cells.size());
  for (const CellIndex& c : cells) path.waypoints.push_back(grid.cell_center(c));
  return path;
}

bool needs_replan(const Path& path, const OccupancyGrid& grid, uint8_t lethal_threshold) {
  for (const Point2& wp : path.waypoints) {
    const auto cell = world_to_cell(grid.spec, wp.x, wp.y);
    if (!cell) return true;  // grid no longer covers the path
    if (grid.at(*cell) != kUnknownCost && grid.at(*cell) >= lethal_threshold) return true;
  }
  return false;
}

VelocityCommand follow(const Path& path, const Pose2D& pose, double lookahead, double v_max,
                       double omega_max, double gain) {
  if (path.waypoints.empty()) throw std::invalid_argument("follow: empty path");

  size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < path.waypoints.size(); ++i) {
    const double d = std::hypot(path.waypoints[i].x - pose.x, path.waypoints[i].y - pose.y);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }

  size_t target = nearest;
  double along = 0.0;
  while (target + 1 < path.waypoints.size() && along < lookahead) {
    along += std::hypot(path.waypoints[target + 1].x - path.waypoints[target].x,
                        path.waypoints[target + 1].y - path.waypoints[target].y);
    ++target;
  }

  const Point2& t = path.waypoints[target];
  double heading_error = 0.0;
  if (std::hypot(t.x - pose.x, t.y - pose.y) > 1e-9) {
    heading_error = normalize_angle(std::atan2(t.y - pose.y, t.x - pose.x) - pose.yaw);
  }

  VelocityCommand cmd;
  cmd.omega = std::clamp(gain * heading_error, -omega_max, omega_max);
  cmd.v = v_max * std::max(0.0, std::cos(heading_error));
  return cmd;
}

}  // namespace gridnav
