#include "gridnav/simworld.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace gridnav {

namespace {

// Slab-method ray/box intersection. Returns the entry distance, or nullopt
// when the ray misses; entry at 0 when the origin is inside.
std::optional<double> ray_box(const Point3& origin, const Point3& dir, const Box& box) {
  double tmin = 0.0;
  double tmax = std::numeric_limits<double>::infinity();
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double lo[3] = {box.min_corner.x, box.min_corner.y, box.min_corner.z};
  const double hi[3] = {box.max_corner.x, box.max_corner.y, box.max_corner.z};
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (o[i] < lo[i] || o[i] > hi[i]) return std::nullopt;
      continue;
    }
    double t1 = (lo[i] - o[i]) / d[i];
    double t2 = (hi[i] - o[i]) / d[i];
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
    if (tmin > tmax) return std::nullopt;
  }
  return tmin;
}

}  // namespace

std::optional<double> raycast(const WorldModel& world, const Point3& origin,
                              const Point3& direction, double max_range) {
  if (std::abs(norm(direction) - 1.0) > 1e-9)
    throw std::invalid_argument("raycast: direction must be a unit vector");
  std::optional<double> best;
  for (const Box& box : world.boxes) {
    const auto t = ray_box(origin, direction, box);
    if (!t || *t > max_range) continue;
    if (!best || *t < *best) best = t;
  }
  return best;
}

LaserScan simulate_lidar(const WorldModel& world, const Pose2D& robot_pose, const SensorRig& rig) {
  const RigidTransform world_from_lidar =
      compose(pose2d_to_transform(robot_pose, 0.0), rig.lidar_mount);
  const Point3 origin = world_from_lidar.translation;

  LaserScan scan;
  scan.range_min = 0.0;
  scan.range_max = rig.lidar.max_range;
  scan.angle_min = rig.lidar.angle_min;
  scan.angle_increment = rig.lidar.angle_increment;
  const int n = static_cast<int>(
                    std::floor((rig.lidar.angle_max - rig.lidar.angle_min) /
                               rig.lidar.angle_increment + 1e-9)) + 1;
  scan.angle_max = rig.lidar.angle_min + (n - 1) * rig.lidar.angle_increment;
  scan.ranges.assign(n, kNoReturn);

  for (int i = 0; i < n; ++i) {
    const double a = scan.angle(i);
    const Point3 dir = rotate_vector(world_from_lidar, {std::cos(a), std::sin(a), 0.0});
    const auto t = raycast(world, origin, dir, rig.lidar.max_range);
    if (t) scan.ranges[i] = *t;
  }
  return scan;
}

DepthImage simulate_depth(const WorldModel& world, const Pose2D& robot_pose, const SensorRig& rig,
                          uint64_t rng_seed) {
  const RigidTransform world_from_optical = compose(
      compose(pose2d_to_transform(robot_pose, 0.0), rig.camera_mount), optical_to_body());
  const Point3 origin = world_from_optical.translation;
  const CameraIntrinsics& k = rig.intrinsics;

  DepthImage img(k.width, k.height);
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  // Pixel-index order so the seeded noise stream is reproducible.
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) {
      const Point3 raw{(u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0};
      const double inv_len = 1.0 / norm(raw);
      const Point3 dir_cam{raw.x * inv_len, raw.y * inv_len, raw.z * inv_len};
      const Point3 dir = rotate_vector(world_from_optical, dir_cam);
      // dir_cam.z = cos of the ray's angle off the optical axis, so the far
      // plane caps the ray length at far / dir_cam.z.
      const auto t = raycast(world, origin, dir, rig.frustum.far / dir_cam.z + 1e-9);
      if (!t) continue;
      double z = *t * dir_cam.z;
      if (rig.noise_sigma0 > 0.0) z += unit_normal(rng) * rig.noise_sigma0 * z * z;
      if (z < rig.frustum.near || z > rig.frustum.far) continue;
      img.at(u, v) = z;
    }
  }
  return img;
}

RobotState step_robot(const RobotState& state, const VelocityCommand& cmd, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step_robot: dt must be positive");
  RobotState out = state;
  out.pose.x += cmd.v * std::cos(state.pose.yaw) * dt;
  out.pose.y += cmd.v * std::sin(state.pose.yaw) * dt;
  out.pose.yaw = normalize_angle(state.pose.yaw + cmd.omega * dt);
  out.v = cmd.v;
  out.omega = cmd.omega;
  return out;
}

double distance_to_footprint(const Point2& p, const Box& box) {
  const double dx = std::max({box.min_corner.x - p.x, 0.0, p.x - box.max_corner.x});
  const double dy = std::max({box.min_corner.y - p.y, 0.0, p.y - box.max_corner.y});
  return std::hypot(dx, dy);
}

}  // namespace gridnav
