#ifndef GRIDNAV_COSTMAP_HPP
#define GRIDNAV_COSTMAP_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gridnav/camera.hpp"
#include "gridnav/geometry.hpp"

namespace gridnav {

inline constexpr uint8_t kFreeCost = 0;
inline constexpr uint8_t kLethalCost = 100;
inline constexpr uint8_t kUnknownCost = 255;

struct GridSpec {
  int width = 0;    // cells
  int height = 0;   // cells
  double resolution = 0.05;  // meters per cell
  Pose2D origin;    // world pose of cell (0,0)'s corner

  bool operator==(const GridSpec& o) const {
    return width == o.width && height == o.height && resolution == o.resolution &&
           origin.x == o.origin.x && origin.y == o.origin.y && origin.yaw == o.origin.yaw;
  }
};

struct CellIndex {
  int x = 0;
  int y = 0;
  bool operator==(const CellIndex&) const = default;
};

struct OccupancyGrid {
  GridSpec spec;
  std::vector<uint8_t> cost;

  OccupancyGrid() = default;
  explicit OccupancyGrid(const GridSpec& s, uint8_t fill = kUnknownCost)
      : spec(s), cost(static_cast<size_t>(s.width) * s.height, fill) {}

  bool in_bounds(const CellIndex& c) const {
    return c.x >= 0 && c.x < spec.width && c.y >= 0 && c.y < spec.height;
  }
  uint8_t at(const CellIndex& c) const { return cost[static_cast<size_t>(c.y) * spec.width + c.x]; }
  uint8_t& at(const CellIndex& c) { return cost[static_cast<size_t>(c.y) * spec.width + c.x]; }

  /// World coordinates of a cell's center.
  Point2 cell_center(const CellIndex& c) const;
};

/// Obstacle layer tuning; defaults match the stock camera integration.
struct ObstacleLayerParams {
  double max_obstacle_height = 1.0;
  double min_obstacle_height = 0.35;
  double obstacle_range = 2.0;
  double raytrace_range = 2.0;
  bool marking = true;
  bool clearing = true;
};

struct InflationParams {
  double inscribed_radius = 0.25;
  double inflation_radius = 0.55;
  double decay = 10.0;  // 1/m
};

/// Floor-convention world-to-cell lookup; nullopt when outside the grid.
std::optional<CellIndex> world_to_cell(const GridSpec& spec, double x, double y);

/// Marks the cell under every cloud point inside the configured height band
/// and within obstacle_range of the sensor. Returns how many cells changed
/// to lethal.
size_t mark_from_pointcloud(OccupancyGrid& grid, const PointCloud& cloud, const Point2& sensor_xy,
                            const ObstacleLayerParams& params);

/// Clears cells along the ray from the sensor to each endpoint (endpoint cell
/// excluded); endpoints beyond raytrace_range are pulled back onto the ray.
/// Returns how many cells changed to free.
size_t clear_by_raytrace(OccupancyGrid& grid, const Point2& sensor_xy,
                         std::span<const Point2> endpoints, const ObstacleLayerParams& params);

/// Full scan update: clears along every ray first, then marks in-range
/// returns, so no ray can erase another return's endpoint.
size_t mark_from_laserscan(OccupancyGrid& grid, const LaserScan& scan, const Pose2D& sensor_pose,
                           const ObstacleLayerParams& params);

/// Spreads decaying cost outward from lethal cells; each output cell is
/// max(original, f(d)) with d the euclidean distance to the nearest lethal
/// cell center.
OccupancyGrid inflate(const OccupancyGrid& grid, const InflationParams& params);

/// Per-cell maximum across layers; UNKNOWN acts as the identity.
OccupancyGrid compose_layers(std::span<const OccupancyGrid> layers);

/// Inflation cost law, exposed for tests.
uint8_t inflation_cost(double distance, const InflationParams& params);

}  // namespace gridnav

#endif
