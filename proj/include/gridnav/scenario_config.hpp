#ifndef GRIDNAV_SCENARIO_CONFIG_HPP
#define GRIDNAV_SCENARIO_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "gridnav/costmap.hpp"
#include "gridnav/planner.hpp"
#include "gridnav/simworld.hpp"

namespace gridnav {

/// Configuration problem; message carries "line N" when it came from a file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RobotConfig {
  Pose2D start;
  double radius = 0.25;
  double height = 1.0;  // boxes overlapping [0, height] can collide
};

struct LidarConfig {
  bool enabled = true;
  RigidTransform mount = RigidTransform::from_translation(0.20, 0.0, 0.15);
  LidarParams params;
  ObstacleLayerParams layer{1.0, 0.0, 8.0, 8.0, true, true};
};

struct CameraConfig {
  bool enabled = true;
  RigidTransform mount = default_camera_mount();
  int width = 160;
  int height = 90;
  double hfov = 87.0 * M_PI / 180.0;
  double vfov = 58.0 * M_PI / 180.0;
  double near = 0.3;
  double far = 3.0;
  double sigma0 = 0.004;  // depth noise sigma(z) = sigma0 * z^2
};

struct CostmapConfig {
  GridSpec spec{200, 200, 0.05, Pose2D{}};
  ObstacleLayerParams camera_layer;  // keys exposed verbatim in [costmap]
  InflationParams inflation;
  uint8_t unknown_cost = 50;
};

struct PlannerConfig {
  int connectivity = 8;
  uint8_t lethal_threshold = kLethalCost;
  bool use_astar = false;
  double v_max = 0.5;
  double omega_max = 1.5;
  double lookahead = 0.4;
};

struct RunConfig {
  double dt = 0.1;
  double timeout = 60.0;
  Point2 goal;
  double goal_tolerance = 0.1;
  uint64_t seed = 1;
  std::vector<int> snapshot_ticks;
};

struct ScenarioConfig {
  WorldModel world;
  RobotConfig robot;
  LidarConfig lidar;
  CameraConfig camera;
  CostmapConfig costmap;
  PlannerConfig planner;
  RunConfig run;
};

/// Parses the scenario file format: '[section]' headers, 'key = value'
/// entries, '#' comments. Dotted overrides ("section.key=value") are applied
/// after the file parses and must name documented keys.
ScenarioConfig parse_scenario_config(const std::string& path,
                                     const std::vector<std::string>& overrides = {});

/// Same, from in-memory text (diagnostics still carry line numbers).
ScenarioConfig parse_scenario_config_text(const std::string& text,
                                          const std::vector<std::string>& overrides = {});

}  // namespace gridnav

#endif
