#include "gridnav/costmap.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace gridnav {

Point2 OccupancyGrid::cell_center(const CellIndex& c) const {
  const double gx = (c.x + 0.5) * spec.resolution;
  const double gy = (c.y + 0.5) * spec.resolution;
  const double cth = std::cos(spec.origin.yaw), sth = std::sin(spec.origin.yaw);
  return {spec.origin.x + cth * gx - sth * gy, spec.origin.y + sth * gx + cth * gy};
}

std::optional<CellIndex> world_to_cell(const GridSpec& spec, double x, double y) {
  const double dx = x - spec.origin.x;
  const double dy = y - spec.origin.y;
  const double cth = std::cos(spec.origin.yaw), sth = std::sin(spec.origin.yaw);
  const double gx = cth * dx + sth * dy;
  const double gy = -sth * dx + cth * dy;
  const int cx = static_cast<int>(std::floor(gx / spec.resolution));
  const int cy = static_cast<int>(std::floor(gy / spec.resolution));
  const CellIndex c{cx, cy};
  if (cx < 0 || cx >= spec.width || cy < 0 || cy >= spec.height) return std::nullopt;
  return c;
}

size_t mark_from_pointcloud(OccupancyGrid& grid, const PointCloud& cloud, const Point2& sensor_xy,
                            const ObstacleLayerParams& params) {
  if (!params.marking) return 0;
  size_t marked = 0;
  for (const Point3& p : cloud.points) {
    if (p.z < params.min_obstacle_height || p.z > params.max_obstacle_height) continue;
    if (std::hypot(p.x - sensor_xy.x, p.y - sensor_xy.y) > params.obstacle_range) continue;
    const auto cell = world_to_cell(grid.spec, p.x, p.y);
    if (!cell) continue;
    if (grid.at(*cell) != kLethalCost) {
      grid.at(*cell) = kLethalCost;
      ++marked;
    }
  }
  return marked;
}

namespace {

// Visits the cells of the integer segment from a to b inclusive, in order.
template <typename Fn>
void bresenham(CellIndex a, CellIndex b, Fn&& visit) {
  int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  CellIndex c = a;
  while (true) {
    visit(c);
    if (c.x == b.x && c.y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      c.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      c.y += sy;
    }
  }
}

}  // namespace

size_t clear_by_raytrace(OccupancyGrid& grid, const Point2& sensor_xy,
                         std::span<const Point2> endpoints, const ObstacleLayerParams& params) {
  if (!params.clearing) return 0;
  const auto sensor_cell = world_to_cell(grid.spec, sensor_xy.x, sensor_xy.y);
  if (!sensor_cell) return 0;
  size_t cleared = 0;
  for (Point2 end : endpoints) {
    const double dist = planar_distance(sensor_xy, end);
    if (dist > params.raytrace_range && dist > 0.0) {
      const double s = params.raytrace_range / dist;
      end = {sensor_xy.x + (end.x - sensor_xy.x) * s, sensor_xy.y + (end.y - sensor_xy.y) * s};
    }
    // The endpoint cell may fall outside the grid; clamp by walking the line
    // and skipping out-of-bounds cells.
    const double cth = std::cos(grid.spec.origin.yaw), sth = std::sin(grid.spec.origin.yaw);
    const double dx = end.x - grid.spec.origin.x;
    const double dy = end.y - grid.spec.origin.y;
    const CellIndex end_cell{
        static_cast<int>(std::floor((cth * dx + sth * dy) / grid.spec.resolution)),
        static_cast<int>(std::floor((-sth * dx + cth * dy) / grid.spec.resolution))};
    bresenham(*sensor_cell, end_cell, [&](const CellIndex& c) {
      if (c == end_cell) return;  // a return's own cell must survive clearing
      if (!grid.in_bounds(c)) return;
      if (grid.at(c) != kFreeCost) {
        grid.at(c) = kFreeCost;
        ++cleared;
      }
    });
  }
  return cleared;
}

size_t mark_from_laserscan(OccupancyGrid& grid, const LaserScan& scan, const Pose2D& sensor_pose,
                           const ObstacleLayerParams& params) {
  const Point2 sensor_xy{sensor_pose.x, sensor_pose.y};
  std::vector<Point2> clear_ends;
  std::vector<Point2> mark_ends;
  clear_ends.reserve(scan.ranges.size());
  for (size_t i = 0; i < scan.ranges.size(); ++i) {
    const double bearing = sensor_pose.yaw + scan.angle(i);
    const double cb = std::cos(bearing), sb = std::sin(bearing);
    const double r = scan.ranges[i];
    if (is_return(r)) {
      const Point2 end{sensor_xy.x + cb * r, sensor_xy.y + sb * r};
      clear_ends.push_back(end);
      if (r <= params.obstacle_range) mark_ends.push_back(end);
    } else {
      // No return: free space at least to raytrace_range along this bearing.
      clear_ends.push_back({sensor_xy.x + cb * params.raytrace_range,
                            sensor_xy.y + sb * params.raytrace_range});
    }
  }
  clear_by_raytrace(grid, sensor_xy, clear_ends, params);
  size_t marked = 0;
  if (params.marking) {
    for (const Point2& end : mark_ends) {
      const auto cell = world_to_cell(grid.spec, end.x, end.y);
      if (!cell) continue;
      if (grid.at(*cell) != kLethalCost) {
        grid.at(*cell) = kLethalCost;
        ++marked;
      }
    }
  }
  return marked;
}

uint8_t inflation_cost(double distance, const InflationParams& params) {
  if (distance <= 0.0) return kLethalCost;
  if (distance <= params.inscribed_radius) return 99;
  if (distance <= params.inflation_radius) {
    const double c = 98.0 * std::exp(-params.decay * (distance - params.inscribed_radius));
    return static_cast<uint8_t>(std::lround(c));
  }
  return 0;
}

OccupancyGrid inflate(const OccupancyGrid& grid, const InflationParams& params) {
  if (params.inscribed_radius <= 0.0 || params.inscribed_radius > params.inflation_radius ||
      params.decay <= 0.0)
    throw std::invalid_argument("inflate: invalid inflation parameters");

  const int radius_cells =
      static_cast<int>(std::ceil(params.inflation_radius / grid.spec.resolution));

  // Kernel of (offset, distance) pairs within the inflation radius.
  struct Offset {
    int dx, dy;
    double dist;
  };
  std::vector<Offset> kernel;
  kernel.reserve(static_cast<size_t>(2 * radius_cells + 1) * (2 * radius_cells + 1));
  for (int dy = -radius_cells; dy <= radius_cells; ++dy) {
    for (int dx = -radius_cells; dx <= radius_cells; ++dx) {
      const double d = std::hypot(dx, dy) * grid.spec.resolution;
      if (d <= params.inflation_radius) kernel.push_back({dx, dy, d});
    }
  }

  const size_t n = grid.cost.size();
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (int y = 0; y < grid.spec.height; ++y) {
    for (int x = 0; x < grid.spec.width; ++x) {
      if (grid.at({x, y}) != kLethalCost) continue;
      for (const Offset& o : kernel) {
        const CellIndex c{x + o.dx, y + o.dy};
        if (!grid.in_bounds(c)) continue;
        double& slot = nearest[static_cast<size_t>(c.y) * grid.spec.width + c.x];
        if (o.dist < slot) slot = o.dist;
      }
    }
  }

  OccupancyGrid out = grid;
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(nearest[i])) continue;
    const uint8_t f = inflation_cost(nearest[i], params);
    if (out.cost[i] == kUnknownCost) {
      // Obstacle influence overrides unknown space.
      if (f > 0) out.cost[i] = f;
    } else {
      out.cost[i] = std::max(out.cost[i], f);
    }
  }
  return out;
}

OccupancyGrid compose_layers(std::span<const OccupancyGrid> layers) {
  if (layers.empty()) throw std::invalid_argument("compose_layers: no layers");
  for (const OccupancyGrid& layer : layers) {
    if (!(layer.spec == layers.front().spec))
      throw std::invalid_argument("compose_layers: layer GridSpecs differ");
  }
  OccupancyGrid out = layers.front();
  for (size_t li = 1; li < layers.size(); ++li) {
    const OccupancyGrid& layer = layers[li];
    for (size_t i = 0; i < out.cost.size(); ++i) {
      const uint8_t a = out.cost[i];
      const uint8_t b = layer.cost[i];
      if (a == kUnknownCost) {
        out.cost[i] = b;
      } else if (b != kUnknownCost) {
        out.cost[i] = std::max(a, b);
      }
    }
  }
  return out;
}

}  // namespace gridnav
