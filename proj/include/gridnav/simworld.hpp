#ifndef GRIDNAV_SIMWORLD_HPP
#define GRIDNAV_SIMWORLD_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "gridnav/camera.hpp"
#include "gridnav/geometry.hpp"
#include "gridnav/planner.hpp"

namespace gridnav {

struct Box {
  Point3 min_corner;
  Point3 max_corner;

  bool contains(const Point3& p) const {
    return p.x >= min_corner.x && p.x <= max_corner.x && p.y >= min_corner.y &&
           p.y <= max_corner.y && p.z >= min_corner.z && p.z <= max_corner.z;
  }
};

struct Bounds2D {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;
};

struct WorldModel {
  std::vector<Box> boxes;
  Bounds2D bounds;
};

struct RobotState {
  Pose2D pose;
  double v = 0.0;
  double omega = 0.0;
  double radius = 0.25;  // footprint circle
};

struct LidarParams {
  double angle_min = -3.0 * M_PI / 4.0;
  double angle_max = 3.0 * M_PI / 4.0;
  double angle_increment = M_PI / 180.0;
  double max_range = 8.0;
};

struct SensorRig {
  RigidTransform lidar_mount;   // lidar pose in the base frame
  RigidTransform camera_mount;  // camera body pose in the base frame
  LidarParams lidar;
  CameraIntrinsics intrinsics;
  Frustum frustum;
  double noise_sigma0 = 0.0;  // depth noise sigma(z) = sigma0 * z^2, meters
};

/// Nearest intersection of a unit-direction ray with any box surface, as a
/// distance along the ray; nullopt on miss. Rays starting inside a box hit
/// at t = 0.
std::optional<double> raycast(const WorldModel& world, const Point3& origin,
                              const Point3& direction, double max_range);

/// One horizontal ray per bearing at the lidar mount height.
LaserScan simulate_lidar(const WorldModel& world, const Pose2D& robot_pose, const SensorRig& rig);

/// Per-pixel ray cast producing z-depth (perpendicular, not euclidean),
/// plus seeded gaussian noise sigma0 * z^2, culled to [near, far].
DepthImage simulate_depth(const WorldModel& world, const Pose2D& robot_pose, const SensorRig& rig,
                          uint64_t rng_seed);

/// Unicycle Euler step: x += v cos(yaw) dt, y += v sin(yaw) dt, yaw += w dt.
RobotState step_robot(const RobotState& state, const VelocityCommand& cmd, double dt);

/// Planar distance from a point to an axis-aligned rectangle (a box's ground
/// footprint); zero inside.
double distance_to_footprint(const Point2& p, const Box& box);

}  // namespace gridnav

#endif
