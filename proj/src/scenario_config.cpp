#include "gridnav/scenario_config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gridnav {

namespace {

struct Entry {
  std::string value;
  int line;  // 0 for overrides
};

// section -> key -> entries (repeatable keys such as world.box keep them all)
using ConfigMap = std::map<std::string, std::map<std::string, std::vector<Entry>>>;

const std::set<std::string>& repeatable_keys() {
  static const std::set<std::string> keys{"world.box"};
  return keys;
}

// Documented schema: every addressable section.key.
const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"world", {"bounds", "box"}},
      {"robot", {"start", "radius", "height"}},
      {"lidar",
       {"enabled", "translation", "rotation", "angle_min", "angle_max", "increment", "max_range",
        "obstacle_range", "raytrace_range"}},
      {"camera",
       {"enabled", "translation", "rotation", "width", "height", "hfov", "vfov", "near", "far",
        "sigma0"}},
      {"costmap",
       {"resolution", "width", "height", "origin", "max_obstacle_height", "min_obstacle_height",
        "obstacle_range", "raytrace_range", "marking", "clearing", "inscribed_radius",
        "inflation_radius", "decay", "unknown_cost"}},
      {"planner",
       {"connectivity", "lethal_threshold", "use_astar", "v_max", "omega_max", "lookahead"}},
      {"run", {"dt", "timeout", "goal", "goal_tolerance", "seed", "snapshot_ticks"}}};
  return s;
}

[[noreturn]] void fail(const std::string& msg, int line) {
  if (line > 0) throw ConfigError(msg + " (line " + std::to_string(line) + ")");
  throw ConfigError(msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

ConfigMap parse_raw(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) fail("unknown section [" + section + "]", lineno);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'", lineno);
    if (section.empty()) fail("entry before any [section]", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!schema().at(section).count(key))
      fail("unknown key '" + key + "' in section [" + section + "]", lineno);
    auto& slot = map[section][key];
    if (!slot.empty() && !repeatable_keys().count(section + "." + key))
      fail("duplicate key '" + key + "' in section [" + section + "]", lineno);
    slot.push_back({value, lineno});
  }
  return map;
}

void apply_overrides(ConfigMap& map, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) fail("override '" + ov + "' is not key=value", 0);
    const std::string dotted = trim(ov.substr(0, eq));
    const std::string value = trim(ov.substr(eq + 1));
    const auto dot = dotted.find('.');
    if (dot == std::string::npos) fail("override key '" + dotted + "' needs a section prefix", 0);
    const std::string section = dotted.substr(0, dot);
    const std::string key = dotted.substr(dot + 1);
    const auto sit = schema().find(section);
    if (sit == schema().end() || !sit->second.count(key))
      fail("override names undocumented key '" + dotted + "'", 0);
    map[section][key] = {{value, 0}};
  }
}

class Extractor {
 public:
  explicit Extractor(const ConfigMap& map) : map_(map) {}

  bool has(const std::string& section, const std::string& key) const {
    const auto sit = map_.find(section);
    if (sit == map_.end()) return false;
    return sit->second.count(key) > 0;
  }

  const Entry& entry(const std::string& section, const std::string& key) const {
    return map_.at(section).at(key).front();
  }

  std::vector<double> numbers(const std::string& section, const std::string& key,
                              size_t expect) const {
    const Entry& e = entry(section, key);
    const auto vals = split_numbers(e);
    if (expect != 0 && vals.size() != expect)
      fail("key '" + section + "." + key + "' expects " + std::to_string(expect) + " numbers",
           e.line);
    return vals;
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    if (!has(section, key)) return fallback;
    return numbers(section, key, 1)[0];
  }

  bool flag(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const Entry& e = entry(section, key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail("key '" + section + "." + key + "' expects true or false", e.line);
  }

  std::vector<std::vector<double>> repeated(const std::string& section, const std::string& key,
                                            size_t expect) const {
    std::vector<std::vector<double>> out;
    if (!has(section, key)) return out;
    for (const Entry& e : map_.at(section).at(key)) {
      auto vals = split_numbers(e);
      if (vals.size() != expect)
        fail("key '" + section + "." + key + "' expects " + std::to_string(expect) + " numbers",
             e.line);
      out.push_back(std::move(vals));
    }
    return out;
  }

 private:
  static std::vector<double> split_numbers(const Entry& e) {
    std::vector<double> vals;
    std::istringstream ss(e.value);
    std::string tok;
    while (ss >> tok) {
      try {
        size_t used = 0;
        vals.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail("'" + tok + "' is not a number", e.line);
      }
    }
    if (vals.empty()) fail("expected at least one number", e.line);
    return vals;
  }

  const ConfigMap& map_;
};

constexpr double kDegToRad = M_PI / 180.0;

RigidTransform mount_from(const Extractor& ex, const std::string& section,
                          const RigidTransform& fallback) {
  RigidTransform t = fallback;
  if (ex.has(section, "translation")) {
    const auto v = ex.numbers(section, "translation", 3);
    t.translation = {v[0], v[1], v[2]};
  }
  if (ex.has(section, "rotation")) {
    const auto v = ex.numbers(section, "rotation", 3);  // yaw pitch roll, degrees
    const Point3 keep = t.translation;
    t = RigidTransform::from_euler_zyx(v[0] * kDegToRad, v[1] * kDegToRad, v[2] * kDegToRad);
    t.translation = keep;
  }
  return t;
}

ScenarioConfig extract(const ConfigMap& map) {
  const Extractor ex(map);
  ScenarioConfig cfg;

  if (ex.has("world", "bounds")) {
    const auto b = ex.numbers("world", "bounds", 4);
    cfg.world.bounds = {b[0], b[1], b[2], b[3]};
  }
  for (const auto& b : ex.repeated("world", "box", 6)) {
    const Box box{{b[0], b[1], b[2]}, {b[3], b[4], b[5]}};
    if (!(box.min_corner.x < box.max_corner.x && box.min_corner.y < box.max_corner.y &&
          box.min_corner.z < box.max_corner.z))
      throw ConfigError("world.box must have min corner strictly below max corner");
    cfg.world.boxes.push_back(box);
  }

  if (ex.has("robot", "start")) {
    const auto s = ex.numbers("robot", "start", 3);
    cfg.robot.start = Pose2D{s[0], s[1], s[2] * kDegToRad};
  }
  cfg.robot.radius = ex.number("robot", "radius", cfg.robot.radius);
  cfg.robot.height = ex.number("robot", "height", cfg.robot.height);

  cfg.lidar.enabled = ex.flag("lidar", "enabled", cfg.lidar.enabled);
  cfg.lidar.mount = mount_from(ex, "lidar", cfg.lidar.mount);
  cfg.lidar.params.angle_min =
      ex.number("lidar", "angle_min", cfg.lidar.params.angle_min / kDegToRad) * kDegToRad;
  cfg.lidar.params.angle_max =
      ex.number("lidar", "angle_max", cfg.lidar.params.angle_max / kDegToRad) * kDegToRad;
  cfg.lidar.params.angle_increment =
      ex.number("lidar", "increment", cfg.lidar.params.angle_increment / kDegToRad) * kDegToRad;
  cfg.lidar.params.max_range = ex.number("lidar", "max_range", cfg.lidar.params.max_range);
  cfg.lidar.layer.obstacle_range =
      ex.number("lidar", "obstacle_range", cfg.lidar.params.max_range);
  cfg.lidar.layer.raytrace_range =
      ex.number("lidar", "raytrace_range", cfg.lidar.params.max_range);

  cfg.camera.enabled = ex.flag("camera", "enabled", cfg.camera.enabled);
  cfg.camera.mount = mount_from(ex, "camera", cfg.camera.mount);
  cfg.camera.width = static_cast<int>(ex.number("camera", "width", cfg.camera.width));
  cfg.camera.height = static_cast<int>(ex.number("camera", "height", cfg.camera.height));
  cfg.camera.hfov = ex.number("camera", "hfov", cfg.camera.hfov / kDegToRad) * kDegToRad;
  cfg.camera.vfov = ex.number("camera", "vfov", cfg.camera.vfov / kDegToRad) * kDegToRad;
  cfg.camera.near = ex.number("camera", "near", cfg.camera.near);
  cfg.camera.far = ex.number("camera", "far", cfg.camera.far);
  cfg.camera.sigma0 = ex.number("camera", "sigma0", cfg.camera.sigma0);

  cfg.costmap.spec.resolution = ex.number("costmap", "resolution", cfg.costmap.spec.resolution);
  cfg.costmap.spec.width = static_cast<int>(ex.number("costmap", "width", cfg.costmap.spec.width));
  cfg.costmap.spec.height =
      static_cast<int>(ex.number("costmap", "height", cfg.costmap.spec.height));
  if (ex.has("costmap", "origin")) {
    const auto o = ex.numbers("costmap", "origin", 2);
    cfg.costmap.spec.origin = Pose2D{o[0], o[1], 0.0};
  }
  auto& cam_layer = cfg.costmap.camera_layer;
  cam_layer.max_obstacle_height =
      ex.number("costmap", "max_obstacle_height", cam_layer.max_obstacle_height);
  cam_layer.min_obstacle_height =
      ex.number("costmap", "min_obstacle_height", cam_layer.min_obstacle_height);
  cam_layer.obstacle_range = ex.number("costmap", "obstacle_range", cam_layer.obstacle_range);
  cam_layer.raytrace_range = ex.number("costmap", "raytrace_range", cam_layer.raytrace_range);
  cam_layer.marking = ex.flag("costmap", "marking", cam_layer.marking);
  cam_layer.clearing = ex.flag("costmap", "clearing", cam_layer.clearing);
  cfg.costmap.inflation.inscribed_radius =
      ex.number("costmap", "inscribed_radius", cfg.costmap.inflation.inscribed_radius);
  cfg.costmap.inflation.inflation_radius =
      ex.number("costmap", "inflation_radius", cfg.costmap.inflation.inflation_radius);
  cfg.costmap.inflation.decay = ex.number("costmap", "decay", cfg.costmap.inflation.decay);
  cfg.costmap.unknown_cost =
      static_cast<uint8_t>(ex.number("costmap", "unknown_cost", cfg.costmap.unknown_cost));

  cfg.planner.connectivity =
      static_cast<int>(ex.number("planner", "connectivity", cfg.planner.connectivity));
  cfg.planner.lethal_threshold =
      static_cast<uint8_t>(ex.number("planner", "lethal_threshold", cfg.planner.lethal_threshold));
  cfg.planner.use_astar = ex.flag("planner", "use_astar", cfg.planner.use_astar);
  cfg.planner.v_max = ex.number("planner", "v_max", cfg.planner.v_max);
  cfg.planner.omega_max = ex.number("planner", "omega_max", cfg.planner.omega_max);
  cfg.planner.lookahead = ex.number("planner", "lookahead", cfg.planner.lookahead);

  cfg.run.dt = ex.number("run", "dt", cfg.run.dt);
  cfg.run.timeout = ex.number("run", "timeout", cfg.run.timeout);
  if (!ex.has("run", "goal")) throw ConfigError("run.goal is required");
  const auto g = ex.numbers("run", "goal", 2);
  cfg.run.goal = {g[0], g[1]};
  cfg.run.goal_tolerance = ex.number("run", "goal_tolerance", cfg.run.goal_tolerance);
  cfg.run.seed = static_cast<uint64_t>(ex.number("run", "seed", 1.0));
  if (ex.has("run", "snapshot_ticks")) {
    for (double t : ex.numbers("run", "snapshot_ticks", 0))
      cfg.run.snapshot_ticks.push_back(static_cast<int>(t));
  }
  return cfg;
}

void validate(const ScenarioConfig& cfg) {
  const auto& b = cfg.world.bounds;
  if (!(b.xmin < b.xmax && b.ymin < b.ymax)) throw ConfigError("world.bounds must be non-empty");
  for (const Box& box : cfg.world.boxes) {
    if (box.min_corner.x < b.xmin || box.max_corner.x > b.xmax || box.min_corner.y < b.ymin ||
        box.max_corner.y > b.ymax)
      throw ConfigError("world.box extends outside world.bounds");
  }
  if (cfg.robot.radius <= 0.0) throw ConfigError("robot.radius must be positive");
  if (cfg.run.dt <= 0.0) throw ConfigError("run.dt must be positive");
  if (cfg.run.timeout <= 0.0) throw ConfigError("run.timeout must be positive");
  if (cfg.camera.sigma0 < 0.0) throw ConfigError("camera.sigma0 must be non-negative");
  if (!(cfg.camera.near > 0.0 && cfg.camera.near < cfg.camera.far))
    throw ConfigError("camera requires 0 < near < far");
  if (cfg.costmap.spec.width < 1 || cfg.costmap.spec.height < 1 ||
      cfg.costmap.spec.resolution <= 0.0)
    throw ConfigError("costmap grid must have positive size and resolution");
  const auto& layer = cfg.costmap.camera_layer;
  if (!(layer.min_obstacle_height < layer.max_obstacle_height))
    throw ConfigError("costmap.min_obstacle_height must be below max_obstacle_height");
  if (layer.obstacle_range <= 0.0 || layer.raytrace_range <= 0.0)
    throw ConfigError("costmap ranges must be positive");
  if (cfg.planner.connectivity != 4 && cfg.planner.connectivity != 8)
    throw ConfigError("planner.connectivity must be 4 or 8");
}

}  // namespace

ScenarioConfig parse_scenario_config_text(const std::string& text,
                                          const std::vector<std::string>& overrides) {
  ConfigMap map = parse_raw(text);
  apply_overrides(map, overrides);
  ScenarioConfig cfg = extract(map);
  validate(cfg);
  return cfg;
}

ScenarioConfig parse_scenario_config(const std::string& path,
                                     const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config_text(ss.str(), overrides);
}

}  // namespace gridnav
