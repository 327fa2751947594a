#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridnav/io.hpp"
#include "gridnav/scenario.hpp"
#include "gridnav/streamsync.hpp"

namespace py = pybind11;
using namespace gridnav;

namespace {

DepthImage depth_image_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) throw std::invalid_argument("depth image array must be 2-D (height, width)");
  DepthImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  const auto view = a.unchecked<2>();
  for (int v = 0; v < img.height; ++v)
    for (int u = 0; u < img.width; ++u) {
      const double z = view(v, u);
      img.at(u, v) = (std::isfinite(z) && z > 0.0) ? z : kNoReturn;
    }
  return img;
}

py::array_t<double> depth_image_to_array(const DepthImage& img) {
  py::array_t<double> out({img.height, img.width});
  auto view = out.mutable_unchecked<2>();
  for (int v = 0; v < img.height; ++v)
    for (int u = 0; u < img.width; ++u) view(v, u) = img.at(u, v);
  return out;
}

py::array_t<double> cloud_to_array(const PointCloud& cloud) {
  py::array_t<double> out({static_cast<py::ssize_t>(cloud.points.size()), py::ssize_t(3)});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    view(i, 0) = cloud.points[i].x;
    view(i, 1) = cloud.points[i].y;
    view(i, 2) = cloud.points[i].z;
  }
  return out;
}

py::array_t<uint8_t> grid_to_array(const OccupancyGrid& grid) {
  py::array_t<uint8_t> out({grid.spec.height, grid.spec.width});
  auto view = out.mutable_unchecked<2>();
  for (int y = 0; y < grid.spec.height; ++y)
    for (int x = 0; x < grid.spec.width; ++x) view(y, x) = grid.at({x, y});
  return out;
}

py::array_t<double> trajectory_to_array(const std::vector<TrajectorySample>& traj) {
  py::array_t<double> out({static_cast<py::ssize_t>(traj.size()), py::ssize_t(4)});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    view(i, 0) = traj[i].t;
    view(i, 1) = traj[i].pose.x;
    view(i, 2) = traj[i].pose.y;
    view(i, 3) = traj[i].pose.yaw;
  }
  return out;
}

py::array_t<double> path_to_array(const Path& path) {
  py::array_t<double> out({static_cast<py::ssize_t>(path.waypoints.size()), py::ssize_t(2)});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < view.shape(0); ++i) {
    view(i, 0) = path.waypoints[i].x;
    view(i, 1) = path.waypoints[i].y;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_gridnav, m) {
  m.doc() = "Layered-costmap navigation simulator";

  // geometry -------------------------------------------------------------
  py::class_<Point3>(m, "Point3")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("x", &Point3::x)
      .def_readwrite("y", &Point3::y)
      .def_readwrite("z", &Point3::z)
      .def("__repr__", [](const Point3& p) {
        return "Point3(" + format_double(p.x) + ", " + format_double(p.y) + ", " +
               format_double(p.z) + ")";
      });

  py::class_<Pose2D>(m, "Pose2D")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("yaw"))
      .def_readwrite("x", &Pose2D::x)
      .def_readwrite("y", &Pose2D::y)
      .def_readwrite("yaw", &Pose2D::yaw);

  py::class_<RigidTransform>(m, "RigidTransform")
      .def(py::init<>())
      .def_static("identity", &RigidTransform::identity)
      .def_static("from_translation", &RigidTransform::from_translation, py::arg("x"),
                  py::arg("y"), py::arg("z"))
      .def_static("from_euler_zyx", &RigidTransform::from_euler_zyx, py::arg("yaw"),
                  py::arg("pitch"), py::arg("roll"))
      .def_readwrite("translation", &RigidTransform::translation)
      .def_property_readonly("rotation",
                             [](const RigidTransform& t) {
                               py::array_t<double> out({3, 3});
                               std::copy(t.rotation.begin(), t.rotation.end(),
                                         out.mutable_data());
                               return out;
                             })
      .def("rotation_orthonormal", &RigidTransform::rotation_orthonormal,
           py::arg("tol") = 1e-9);

  m.def("normalize_angle", &normalize_angle, py::arg("angle"));
  m.def("transform_point", &transform_point, py::arg("transform"), py::arg("point"));
  m.def("compose", &compose, py::arg("a"), py::arg("b"));
  m.def("invert", &invert, py::arg("transform"));
  m.def("pose2d_to_transform", &pose2d_to_transform, py::arg("pose"), py::arg("z_offset") = 0.0);
  m.def("default_camera_mount", &default_camera_mount);
  m.def("optical_to_body", &optical_to_body);

  // camera ----------------------------------------------------------------
  py::class_<CameraIntrinsics>(m, "CameraIntrinsics")
      .def(py::init<>())
      .def_readwrite("width", &CameraIntrinsics::width)
      .def_readwrite("height", &CameraIntrinsics::height)
      .def_readwrite("fx", &CameraIntrinsics::fx)
      .def_readwrite("fy", &CameraIntrinsics::fy)
      .def_readwrite("cx", &CameraIntrinsics::cx)
      .def_readwrite("cy", &CameraIntrinsics::cy)
      .def("hfov", &CameraIntrinsics::hfov)
      .def("vfov", &CameraIntrinsics::vfov);

  py::class_<Frustum>(m, "Frustum")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("near"), py::arg("far"),
           py::arg("hfov"), py::arg("vfov"))
      .def_readwrite("near", &Frustum::near)
      .def_readwrite("far", &Frustum::far)
      .def_readwrite("hfov", &Frustum::hfov)
      .def_readwrite("vfov", &Frustum::vfov);

  py::class_<DepthImage>(m, "DepthImage")
      .def(py::init(&depth_image_from_array), py::arg("depths"),
           "Build from a 2-D (height, width) array of meters; NaN/0 = no return.")
      .def_readonly("width", &DepthImage::width)
      .def_readonly("height", &DepthImage::height)
      .def("to_array", &depth_image_to_array);

  py::class_<PointCloud>(m, "PointCloud")
      .def_readonly("frame_id", &PointCloud::frame_id)
      .def_property_readonly("size", [](const PointCloud& c) { return c.points.size(); })
      .def("to_array", &cloud_to_array);

  py::class_<LaserScan>(m, "LaserScan")
      .def_readwrite("angle_min", &LaserScan::angle_min)
      .def_readwrite("angle_max", &LaserScan::angle_max)
      .def_readwrite("angle_increment", &LaserScan::angle_increment)
      .def_readwrite("range_min", &LaserScan::range_min)
      .def_readwrite("range_max", &LaserScan::range_max)
      .def_readwrite("ranges", &LaserScan::ranges)
      .def("angle", &LaserScan::angle, py::arg("index"));

  m.def("intrinsics_from_fov", &intrinsics_from_fov, py::arg("width"), py::arg("height"),
        py::arg("hfov"), py::arg("vfov"));
  m.def("frustum_contains", &frustum_contains, py::arg("frustum"), py::arg("point"));
  m.def("deproject", &deproject, py::arg("intrinsics"), py::arg("u"), py::arg("v"),
        py::arg("depth"));
  m.def("depth_image_to_pointcloud", &depth_image_to_pointcloud, py::arg("image"),
        py::arg("intrinsics"), py::arg("frustum"), py::arg("frame_id") = "camera");
  m.def("depth_image_to_laserscan", &depth_image_to_laserscan, py::arg("image"),
        py::arg("intrinsics"), py::arg("band_center_row"), py::arg("band_height"),
        py::arg("range_min"), py::arg("range_max"));

  // costmap ---------------------------------------------------------------
  m.attr("FREE_COST") = kFreeCost;
  m.attr("LETHAL_COST") = kLethalCost;
  m.attr("UNKNOWN_COST") = kUnknownCost;

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def(py::init([](int width, int height, double resolution, const Pose2D& origin) {
             return GridSpec{width, height, resolution, origin};
           }),
           py::arg("width"), py::arg("height"), py::arg("resolution"),
           py::arg("origin") = Pose2D{})
      .def_readwrite("width", &GridSpec::width)
      .def_readwrite("height", &GridSpec::height)
      .def_readwrite("resolution", &GridSpec::resolution)
      .def_readwrite("origin", &GridSpec::origin);

  py::class_<OccupancyGrid>(m, "OccupancyGrid")
      .def(py::init<const GridSpec&, uint8_t>(), py::arg("spec"),
           py::arg("fill") = kUnknownCost)
      .def_readonly("spec", &OccupancyGrid::spec)
      .def("get", [](const OccupancyGrid& g, int x, int y) { return g.at({x, y}); }, py::arg("x"),
           py::arg("y"))
      .def("set",
           [](OccupancyGrid& g, int x, int y, uint8_t cost) { g.at({x, y}) = cost; }, py::arg("x"),
           py::arg("y"), py::arg("cost"))
      .def("to_array", &grid_to_array);

  py::class_<ObstacleLayerParams>(m, "ObstacleLayerParams")
      .def(py::init<>())
      .def_readwrite("max_obstacle_height", &ObstacleLayerParams::max_obstacle_height)
      .def_readwrite("min_obstacle_height", &ObstacleLayerParams::min_obstacle_height)
      .def_readwrite("obstacle_range", &ObstacleLayerParams::obstacle_range)
      .def_readwrite("raytrace_range", &ObstacleLayerParams::raytrace_range)
      .def_readwrite("marking", &ObstacleLayerParams::marking)
      .def_readwrite("clearing", &ObstacleLayerParams::clearing);

  py::class_<InflationParams>(m, "InflationParams")
      .def(py::init<>())
      .def_readwrite("inscribed_radius", &InflationParams::inscribed_radius)
      .def_readwrite("inflation_radius", &InflationParams::inflation_radius)
      .def_readwrite("decay", &InflationParams::decay);

  m.def("world_to_cell",
        [](const GridSpec& spec, double x, double y) -> py::object {
          const auto c = world_to_cell(spec, x, y);
          if (!c) return py::none();
          return py::make_tuple(c->x, c->y);
        },
        py::arg("spec"), py::arg("x"), py::arg("y"));
  m.def("mark_from_pointcloud",
        [](OccupancyGrid& grid, const PointCloud& cloud, std::pair<double, double> sensor_xy,
           const ObstacleLayerParams& params) {
          return mark_from_pointcloud(grid, cloud, {sensor_xy.first, sensor_xy.second}, params);
        },
        py::arg("grid"), py::arg("cloud"), py::arg("sensor_xy"), py::arg("params"));
  m.def("clear_by_raytrace",
        [](OccupancyGrid& grid, std::pair<double, double> sensor_xy,
           const std::vector<std::pair<double, double>>& endpoints,
           const ObstacleLayerParams& params) {
          std::vector<Point2> ends;
          ends.reserve(endpoints.size());
          for (const auto& [x, y] : endpoints) ends.push_back({x, y});
          return clear_by_raytrace(grid, {sensor_xy.first, sensor_xy.second}, ends, params);
        },
        py::arg("grid"), py::arg("sensor_xy"), py::arg("endpoints"), py::arg("params"));
  m.def("mark_from_laserscan", &mark_from_laserscan, py::arg("grid"), py::arg("scan"),
        py::arg("sensor_pose"), py::arg("params"));
  m.def("inflate", &inflate, py::arg("grid"), py::arg("params"));
  m.def("compose_layers",
        [](const std::vector<OccupancyGrid>& layers) {
          return compose_layers(std::span<const OccupancyGrid>(layers.data(), layers.size()));
        },
        py::arg("layers"));

  // planner ---------------------------------------------------------------
  py::class_<Path>(m, "Path")
      .def_readonly("total_cost", &Path::total_cost)
      .def_property_readonly("waypoints", &path_to_array);

  py::class_<VelocityCommand>(m, "VelocityCommand")
      .def_readonly("v", &VelocityCommand::v)
      .def_readonly("omega", &VelocityCommand::omega);

  py::class_<PlanOptions>(m, "PlanOptions")
      .def(py::init<>())
      .def_readwrite("connectivity", &PlanOptions::connectivity)
      .def_readwrite("lethal_threshold", &PlanOptions::lethal_threshold)
      .def_readwrite("unknown_cost", &PlanOptions::unknown_cost)
      .def_readwrite("use_astar", &PlanOptions::use_astar);

  m.def("plan_global", &plan_global, py::arg("grid"), py::arg("start"), py::arg("goal"),
        py::arg("options") = PlanOptions{});
  m.def("needs_replan", &needs_replan, py::arg("path"), py::arg("grid"),
        py::arg("lethal_threshold") = kLethalCost);
  m.def("follow", &follow, py::arg("path"), py::arg("pose"), py::arg("lookahead"),
        py::arg("v_max"), py::arg("omega_max"), py::arg("gain") = 1.0);

  // simworld ----------------------------------------------------------------
  py::class_<Box>(m, "Box")
      .def(py::init([](const Point3& lo, const Point3& hi) { return Box{lo, hi}; }),
           py::arg("min_corner"), py::arg("max_corner"))
      .def_readwrite("min_corner", &Box::min_corner)
      .def_readwrite("max_corner", &Box::max_corner);

  py::class_<WorldModel>(m, "WorldModel")
      .def(py::init<>())
      .def_readwrite("boxes", &WorldModel::boxes);

  py::class_<SensorRig>(m, "SensorRig")
      .def(py::init<>())
      .def_readwrite("lidar_mount", &SensorRig::lidar_mount)
      .def_readwrite("camera_mount", &SensorRig::camera_mount)
      .def_readwrite("intrinsics", &SensorRig::intrinsics)
      .def_readwrite("frustum", &SensorRig::frustum)
      .def_readwrite("noise_sigma0", &SensorRig::noise_sigma0);

  m.def("raycast",
        [](const WorldModel& world, const Point3& origin, const Point3& direction,
           double max_range) -> py::object {
          const auto t = raycast(world, origin, direction, max_range);
          if (!t) return py::none();
          return py::float_(*t);
        },
        py::arg("world"), py::arg("origin"), py::arg("direction"), py::arg("max_range"));
  m.def("simulate_lidar", &simulate_lidar, py::arg("world"), py::arg("robot_pose"),
        py::arg("rig"));
  m.def("simulate_depth", &simulate_depth, py::arg("world"), py::arg("robot_pose"),
        py::arg("rig"), py::arg("rng_seed"));
  m.def("step_robot",
        [](const Pose2D& pose, double v, double omega, double dt) {
          RobotState s;
          s.pose = pose;
          return step_robot(s, {v, omega}, dt).pose;
        },
        py::arg("pose"), py::arg("v"), py::arg("omega"), py::arg("dt"));

  // scenario ----------------------------------------------------------------
  py::class_<ScenarioReport>(m, "ScenarioReport")
      .def_property_readonly("outcome",
                             [](const ScenarioReport& r) {
                               switch (r.outcome) {
                                 case ScenarioOutcome::goal_reached: return "goal_reached";
                                 case ScenarioOutcome::collision: return "collision";
                                 case ScenarioOutcome::timeout: return "timeout";
                               }
                               return "unknown";
                             })
      .def_readonly("ticks", &ScenarioReport::ticks)
      .def_readonly("sim_time", &ScenarioReport::sim_time)
      .def_readonly("replan_count", &ScenarioReport::replan_count)
      .def_readonly("final_pose", &ScenarioReport::final_pose)
      .def_readonly("min_clearance", &ScenarioReport::min_clearance)
      .def_property_readonly("initial_path",
                             [](const ScenarioReport& r) { return path_to_array(r.initial_path); })
      .def_property_readonly("trajectory",
                             [](const ScenarioReport& r) { return trajectory_to_array(r.trajectory); });

  m.def("run_scenario_file",
        [](const std::string& path, const std::vector<std::string>& overrides) {
          return run_scenario(parse_scenario_config(path, overrides));
        },
        py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def("run_scenario_text",
        [](const std::string& text, const std::vector<std::string>& overrides) {
          return run_scenario(parse_scenario_config_text(text, overrides));
        },
        py::arg("text"), py::arg("overrides") = std::vector<std::string>{});

  // streamsync ----------------------------------------------------------------
  py::enum_<MessageKind>(m, "MessageKind")
      .value("image", MessageKind::image)
      .value("metadata", MessageKind::metadata);
  py::enum_<QueuePolicy>(m, "QueuePolicy")
      .value("keep_latest", QueuePolicy::keep_latest)
      .value("keep_all", QueuePolicy::keep_all);

  py::class_<TimedMessage>(m, "TimedMessage")
      .def(py::init([](double stamp, double size_mbit, MessageKind kind, uint64_t payload_id) {
             return TimedMessage{stamp, size_mbit, kind, payload_id};
           }),
           py::arg("stamp"), py::arg("size_mbit"), py::arg("kind"), py::arg("payload_id") = 0)
      .def_readwrite("stamp", &TimedMessage::stamp)
      .def_readwrite("size_mbit", &TimedMessage::size_mbit)
      .def_readwrite("kind", &TimedMessage::kind)
      .def_readwrite("payload_id", &TimedMessage::payload_id);

  py::class_<ChannelSpec>(m, "ChannelSpec")
      .def(py::init([](double bandwidth_mbps, QueuePolicy policy, size_t capacity) {
             return ChannelSpec{bandwidth_mbps, policy, capacity};
           }),
           py::arg("bandwidth_mbps"), py::arg("queue_policy") = QueuePolicy::keep_latest,
           py::arg("queue_capacity") = 1)
      .def_readwrite("bandwidth_mbps", &ChannelSpec::bandwidth_mbps)
      .def_readwrite("queue_policy", &ChannelSpec::queue_policy)
      .def_readwrite("queue_capacity", &ChannelSpec::queue_capacity);

  py::class_<Delivered>(m, "Delivered")
      .def_readonly("message", &Delivered::message)
      .def_readonly("arrival", &Delivered::arrival);

  py::class_<SyncedPair>(m, "SyncedPair")
      .def_readonly("metadata", &SyncedPair::metadata)
      .def_readonly("image", &SyncedPair::image)
      .def_readonly("emit_time", &SyncedPair::emit_time);

  m.def("make_periodic_stream", &make_periodic_stream, py::arg("rate_hz"), py::arg("size_mbit"),
        py::arg("kind"), py::arg("horizon"));
  m.def("transmit", &transmit, py::arg("stream"), py::arg("channel"), py::arg("horizon"));
  m.def("synchronize", &synchronize, py::arg("metadata"), py::arg("images"));
  m.def("desync_ratio",
        [](const std::vector<Delivered>& metadata, const std::vector<Delivered>& images)
            -> py::object {
          const auto r = desync_ratio(metadata, images);
          if (!r) return py::none();
          return py::float_(*r);
        },
        py::arg("metadata"), py::arg("images"));

  m.attr("__version__") = "0.1.0";
}
