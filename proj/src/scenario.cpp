#include "gridnav/scenario.hpp"

#include <algorithm>

namespace gridnav {

namespace {

uint64_t tick_seed(uint64_t base, int tick) {
  // splitmix64 step keeps per-tick noise streams decorrelated.
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(tick) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double yaw_of(const RigidTransform& t) { return std::atan2(t.rotation[3], t.rotation[0]); }

Path remaining_path(const Path& path, const Pose2D& pose) {
  if (path.waypoints.empty()) return path;
  size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < path.waypoints.size(); ++i) {
    const double d = std::hypot(path.waypoints[i].x - pose.x, path.waypoints[i].y - pose.y);
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  Path rest;
  rest.waypoints.assign(path.waypoints.begin() + static_cast<long>(nearest),
                        path.waypoints.end());
  rest.total_cost = path.total_cost;
  return rest;
}

}  // namespace

OccupancyGrid make_static_layer(const GridSpec& spec, const Bounds2D& bounds) {
  OccupancyGrid grid(spec, kFreeCost);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const Point2 c = grid.cell_center({x, y});
      if (c.x < bounds.xmin || c.x > bounds.xmax || c.y < bounds.ymin || c.y > bounds.ymax)
        grid.at({x, y}) = kLethalCost;
    }
  }
  return grid;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg, std::optional<int> stop_after_ticks) {
  ScenarioReport report;

  SensorRig rig;
  rig.lidar_mount = cfg.lidar.mount;
  rig.camera_mount = cfg.camera.mount;
  rig.lidar = cfg.lidar.params;
  rig.intrinsics = intrinsics_from_fov(cfg.camera.width, cfg.camera.height, cfg.camera.hfov,
                                       cfg.camera.vfov);
  rig.frustum = {cfg.camera.near, cfg.camera.far, cfg.camera.hfov, cfg.camera.vfov};
  rig.noise_sigma0 = cfg.camera.sigma0;

  const OccupancyGrid static_layer = make_static_layer(cfg.costmap.spec, cfg.world.bounds);
  OccupancyGrid lidar_layer(cfg.costmap.spec, kUnknownCost);
  OccupancyGrid camera_layer(cfg.costmap.spec, kUnknownCost);

  // Boxes whose height range intersects the robot body can be hit.
  std::vector<bool> collidable(cfg.world.boxes.size());
  for (size_t i = 0; i < cfg.world.boxes.size(); ++i) {
    const Box& b = cfg.world.boxes[i];
    collidable[i] = b.min_corner.z <= cfg.robot.height && b.max_corner.z >= 0.0;
  }

  RobotState state;
  state.pose = cfg.robot.start;
  state.radius = cfg.robot.radius;

  report.min_clearance.assign(cfg.world.boxes.size(),
                              std::numeric_limits<double>::infinity());
  const auto observe_clearance = [&](const Pose2D& pose) {
    for (size_t i = 0; i < cfg.world.boxes.size(); ++i) {
      report.min_clearance[i] = std::min(
          report.min_clearance[i],
          distance_to_footprint({pose.x, pose.y}, cfg.world.boxes[i]));
    }
  };
  observe_clearance(state.pose);
  report.trajectory.push_back({0.0, state.pose});

  const PlanOptions plan_opts{cfg.planner.connectivity, cfg.planner.lethal_threshold,
                              cfg.costmap.unknown_cost, cfg.planner.use_astar};
  const Pose2D goal_pose{cfg.run.goal.x, cfg.run.goal.y, 0.0};

  std::optional<Path> path;
  bool have_initial_plan = false;
  const int max_ticks = static_cast<int>(std::ceil(cfg.run.timeout / cfg.run.dt));

  int tick = 0;
  for (; tick < max_ticks; ++tick) {
    // Sense and fold into the obstacle layers.
    if (cfg.lidar.enabled) {
      const RigidTransform world_from_lidar =
          compose(pose2d_to_transform(state.pose, 0.0), rig.lidar_mount);
      const Pose2D lidar_pose{world_from_lidar.translation.x, world_from_lidar.translation.y,
                              yaw_of(world_from_lidar)};
      const LaserScan scan = simulate_lidar(cfg.world, state.pose, rig);
      mark_from_laserscan(lidar_layer, scan, lidar_pose, cfg.lidar.layer);
    }
    if (cfg.camera.enabled) {
      const DepthImage depth =
          simulate_depth(cfg.world, state.pose, rig, tick_seed(cfg.run.seed, tick));
      const PointCloud cloud_optical = depth_image_to_pointcloud(depth, rig.intrinsics, rig.frustum);
      const RigidTransform world_from_optical = compose(
          compose(pose2d_to_transform(state.pose, 0.0), rig.camera_mount), optical_to_body());
      PointCloud cloud_world;
      cloud_world.frame_id = "world";
      cloud_world.points.reserve(cloud_optical.points.size());
      for (const Point3& p : cloud_optical.points)
        cloud_world.points.push_back(transform_point(world_from_optical, p));
      const Point2 sensor_xy{world_from_optical.translation.x, world_from_optical.translation.y};
      std::vector<Point2> ray_ends;
      ray_ends.reserve(cloud_world.points.size());
      for (const Point3& p : cloud_world.points) ray_ends.push_back({p.x, p.y});
      clear_by_raytrace(camera_layer, sensor_xy, ray_ends, cfg.costmap.camera_layer);
      mark_from_pointcloud(camera_layer, cloud_world, sensor_xy, cfg.costmap.camera_layer);
    }

    const OccupancyGrid layers[] = {static_layer, lidar_layer, camera_layer};
    const OccupancyGrid master = inflate(compose_layers(layers), cfg.costmap.inflation);

    if (std::find(cfg.run.snapshot_ticks.begin(), cfg.run.snapshot_ticks.end(), tick) !=
        cfg.run.snapshot_ticks.end()) {
      report.snapshots.emplace_back(tick, master);
    }
    if (stop_after_ticks && tick >= *stop_after_ticks) break;

    // Plan on the fresh costmap; replan only when the remaining path died.
    const auto try_plan = [&]() -> std::optional<Path> {
      try {
        return plan_global(master, state.pose, goal_pose, plan_opts);
      } catch (const std::invalid_argument&) {
        return std::nullopt;  // e.g. the robot's own cell became lethal
      }
    };
    if (!path) {
      path = try_plan();
      if (path && !have_initial_plan) {
        report.initial_path = *path;
        have_initial_plan = true;
      } else if (path) {
        ++report.replan_count;
      }
    } else {
      const Path rest = remaining_path(*path, state.pose);
      if (needs_replan(rest, master, cfg.planner.lethal_threshold)) {
        const auto fresh = try_plan();
        if (fresh) {
          path = fresh;
          ++report.replan_count;
        } else {
          path.reset();  // stand still; retry next tick
        }
      }
    }

    VelocityCommand cmd;  // zero when there is no viable path
    if (path) {
      cmd = follow(remaining_path(*path, state.pose), state.pose, cfg.planner.lookahead,
                   cfg.planner.v_max, cfg.planner.omega_max);
    }
    state = step_robot(state, cmd, cfg.run.dt);
    report.trajectory.push_back({(tick + 1) * cfg.run.dt, state.pose});
    observe_clearance(state.pose);

    bool collided = false;
    for (size_t i = 0; i < cfg.world.boxes.size() && !collided; ++i) {
      if (!collidable[i]) continue;
      collided = distance_to_footprint({state.pose.x, state.pose.y}, cfg.world.boxes[i]) <
                 state.radius;
    }
    if (collided) {
      report.outcome = ScenarioOutcome::collision;
      ++tick;
      break;
    }
    if (std::hypot(state.pose.x - cfg.run.goal.x, state.pose.y - cfg.run.goal.y) <=
        cfg.run.goal_tolerance) {
      report.outcome = ScenarioOutcome::goal_reached;
      ++tick;
      break;
    }
  }

  report.ticks = tick;
  report.sim_time = tick * cfg.run.dt;
  report.final_pose = state.pose;
  return report;
}

}  // namespace gridnav
