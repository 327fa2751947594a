#include "gridnav/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridnav/io.hpp"
#include "gridnav/scenario.hpp"
#include "gridnav/streamsync.hpp"

namespace gridnav {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCollision = 2;
constexpr int kExitTimeout = 3;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_trajectory_csv(const std::vector<TrajectorySample>& traj, const fs::path& path) {
  std::string csv = "t_s,x_m,y_m,yaw_rad\n";
  for (const TrajectorySample& s : traj) {
    csv += format_double(s.t) + "," + format_double(s.pose.x) + "," + format_double(s.pose.y) +
           "," + format_double(s.pose.yaw) + "\n";
  }
  write_text(path, csv);
}

const char* outcome_name(ScenarioOutcome o) {
  switch (o) {
    case ScenarioOutcome::goal_reached: return "goal_reached";
    case ScenarioOutcome::collision: return "collision";
    case ScenarioOutcome::timeout: return "timeout";
  }
  return "unknown";
}

int run_scenario_cmd(const std::string& config_path, const std::string& out_dir,
                     const std::vector<std::string>& overrides) {
  const ScenarioConfig cfg = parse_scenario_config(config_path, overrides);
  fs::create_directories(out_dir);
  const ScenarioReport report = run_scenario(cfg);

  write_trajectory_csv(report.trajectory, fs::path(out_dir) / "trajectory.csv");
  write_path_csv(report.initial_path, (fs::path(out_dir) / "initial_path.csv").string());

  json snapshots = json::array();
  for (const auto& [tick, grid] : report.snapshots) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%04d", tick);
    const fs::path pgm = fs::path(out_dir) / (std::string(name) + ".pgm");
    const fs::path txt = fs::path(out_dir) / (std::string(name) + ".txt");
    write_grid_pgm(grid, pgm.string());
    write_grid_sidecar(grid.spec, txt.string());
    snapshots.push_back({{"tick", tick}, {"pgm", pgm.filename().string()}});
  }

  json doc;
  doc["outcome"] = outcome_name(report.outcome);
  doc["ticks"] = report.ticks;
  doc["sim_time_s"] = report.sim_time;
  doc["replan_count"] = report.replan_count;
  doc["final_pose"] = {report.final_pose.x, report.final_pose.y, report.final_pose.yaw};
  doc["goal"] = {cfg.run.goal.x, cfg.run.goal.y};
  doc["min_clearance_m"] = report.min_clearance;
  doc["initial_path_cost"] = report.initial_path.total_cost;
  doc["trajectory_csv"] = "trajectory.csv";
  doc["snapshots"] = snapshots;
  write_text(fs::path(out_dir) / "report.json", doc.dump(2) + "\n");

  switch (report.outcome) {
    case ScenarioOutcome::goal_reached: return kExitOk;
    case ScenarioOutcome::collision: return kExitCollision;
    case ScenarioOutcome::timeout: return kExitTimeout;
  }
  return kExitError;
}

int depth_to_scan_cmd(const std::string& pgm_path, const std::string& out_csv, double hfov_deg,
                      double vfov_deg, int band_center, int band_height, double range_min,
                      double range_max) {
  const DepthImage img = read_depth_pgm(pgm_path);
  const CameraIntrinsics k = intrinsics_from_fov(img.width, img.height, hfov_deg * M_PI / 180.0,
                                                 vfov_deg * M_PI / 180.0);
  const int center = band_center < 0 ? img.height / 2 : band_center;
  const LaserScan scan =
      depth_image_to_laserscan(img, k, center, band_height, range_min, range_max);
  write_laserscan_csv(scan, out_csv);
  return kExitOk;
}

int depth_to_cloud_cmd(const std::string& pgm_path, const std::string& out_csv, double hfov_deg,
                       double vfov_deg, double near, double far) {
  const DepthImage img = read_depth_pgm(pgm_path);
  const CameraIntrinsics k = intrinsics_from_fov(img.width, img.height, hfov_deg * M_PI / 180.0,
                                                 vfov_deg * M_PI / 180.0);
  const Frustum f{near, far, k.hfov(), k.vfov()};
  write_pointcloud_csv(depth_image_to_pointcloud(img, k, f), out_csv);
  return kExitOk;
}

int sync_demo_cmd(double image_rate, double image_size, double metadata_rate,
                  double metadata_size, double bandwidth, double horizon,
                  const std::string& out_dir) {
  fs::create_directories(out_dir);
  const auto images = make_periodic_stream(image_rate, image_size, MessageKind::image, horizon);
  const auto metadata =
      make_periodic_stream(metadata_rate, metadata_size, MessageKind::metadata, horizon);
  const ChannelSpec channel{bandwidth, QueuePolicy::keep_latest, 1};
  const auto images_rx = transmit(images, channel, horizon);
  const auto metadata_rx = transmit(metadata, channel, horizon);
  const auto pairs = synchronize(metadata_rx, images_rx);

  std::string csv = "time_s,stream,event\n";
  struct Row {
    double t;
    int order;
    std::string stream, event;
  };
  std::vector<Row> rows;
  for (const auto& m : metadata) rows.push_back({m.stamp, 0, "metadata", "sent"});
  for (const auto& m : images) rows.push_back({m.stamp, 0, "image", "sent"});
  for (const auto& d : metadata_rx) rows.push_back({d.arrival, 1, "metadata", "delivered"});
  for (const auto& d : images_rx) rows.push_back({d.arrival, 1, "image", "delivered"});
  for (const auto& p : pairs) rows.push_back({p.emit_time, 2, "pair", "emitted"});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.order < b.order;
  });
  for (const Row& r : rows)
    csv += format_double(r.t) + "," + r.stream + "," + r.event + "\n";
  write_text(fs::path(out_dir) / "events.csv", csv);

  const auto ratio_before = desync_ratio(metadata_rx, images_rx);
  json doc;
  doc["horizon_s"] = horizon;
  doc["image_sent_rate_hz"] = images.size() / horizon;
  doc["image_delivered_rate_hz"] = images_rx.size() / horizon;
  doc["metadata_delivered_rate_hz"] = metadata_rx.size() / horizon;
  doc["pair_count"] = pairs.size();
  if (ratio_before) doc["desync_ratio_before"] = *ratio_before;
  // After synchronization both halves arrive pairwise, so the ratio is 1 by
  // construction whenever any pair was emitted.
  if (!pairs.empty()) doc["desync_ratio_after"] = 1.0;
  write_text(fs::path(out_dir) / "summary.json", doc.dump(2) + "\n");
  return kExitOk;
}

int export_grid_cmd(const std::string& config_path, const std::string& out_pgm, int tick,
                    const std::vector<std::string>& overrides) {
  ScenarioConfig cfg = parse_scenario_config(config_path, overrides);
  cfg.run.snapshot_ticks = {tick};
  const ScenarioReport report = run_scenario(cfg, tick);
  if (report.snapshots.empty()) throw std::runtime_error("scenario ended before requested tick");
  write_grid_pgm(report.snapshots.front().second, out_pgm);
  const fs::path sidecar = fs::path(out_pgm).replace_extension(".txt");
  write_grid_sidecar(report.snapshots.front().second.spec, sidecar.string());
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Layered-costmap navigation simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", out_file;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run-scenario", "Run a scenario config to completion");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_option("--set", overrides, "override config entries, section.key=value");

  double hfov = 87.0, vfov = 58.0, range_min = 0.0, range_max = 10.0;
  int band_center = -1, band_height = 1;
  auto* d2s = app.add_subcommand("depth-to-scan", "Convert a 16-bit depth PGM to a scan CSV");
  d2s->add_option("depth", config_path, "input depth PGM (millimeters)")->required();
  d2s->add_option("-o,--out", out_file, "output CSV")->required();
  d2s->add_option("--hfov", hfov, "horizontal field of view, degrees");
  d2s->add_option("--vfov", vfov, "vertical field of view, degrees");
  d2s->add_option("--band-center-row", band_center, "band center row (default: middle)");
  d2s->add_option("--band-height", band_height, "band height in rows");
  d2s->add_option("--range-min", range_min, "minimum range, meters");
  d2s->add_option("--range-max", range_max, "maximum range, meters");

  double near = 0.3, far = 3.0;
  auto* d2c = app.add_subcommand("depth-to-cloud", "Convert a 16-bit depth PGM to a point CSV");
  d2c->add_option("depth", config_path, "input depth PGM (millimeters)")->required();
  d2c->add_option("-o,--out", out_file, "output CSV")->required();
  d2c->add_option("--hfov", hfov, "horizontal field of view, degrees");
  d2c->add_option("--vfov", vfov, "vertical field of view, degrees");
  d2c->add_option("--near", near, "near clipping plane, meters");
  d2c->add_option("--far", far, "far clipping plane, meters");

  double image_rate = 60.0, image_size = 1.1, metadata_rate = 60.0, metadata_size = 0.001;
  double bandwidth = 1.0, horizon = 60.0;
  auto* sync = app.add_subcommand("sync-demo", "Bandwidth-limited stream and synchronizer demo");
  sync->add_option("--image-rate", image_rate, "image publish rate, Hz")
      ->check(CLI::PositiveNumber);
  sync->add_option("--image-size", image_size, "image size, megabits")->check(CLI::PositiveNumber);
  sync->add_option("--metadata-rate", metadata_rate, "metadata publish rate, Hz")
      ->check(CLI::PositiveNumber);
  sync->add_option("--metadata-size", metadata_size, "metadata size, megabits")
      ->check(CLI::PositiveNumber);
  sync->add_option("--bandwidth", bandwidth, "link bandwidth, megabits/s")
      ->check(CLI::PositiveNumber);
  sync->add_option("--horizon", horizon, "simulated horizon, seconds")->check(CLI::PositiveNumber);
  sync->add_option("-o,--out", out_dir, "output directory");

  int tick = 0;
  auto* exp = app.add_subcommand("export-grid", "Export the composed costmap as an 8-bit PGM");
  exp->add_option("config", config_path, "scenario config file")->required();
  exp->add_option("-o,--out", out_file, "output PGM")->required();
  exp->add_option("--tick", tick, "simulate this many ticks first");
  exp->add_option("--set", overrides, "override config entries, section.key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (run->parsed()) return run_scenario_cmd(config_path, out_dir, overrides);
    if (d2s->parsed())
      return depth_to_scan_cmd(config_path, out_file, hfov, vfov, band_center, band_height,
                               range_min, range_max);
    if (d2c->parsed()) return depth_to_cloud_cmd(config_path, out_file, hfov, vfov, near, far);
    if (sync->parsed())
      return sync_demo_cmd(image_rate, image_size, metadata_rate, metadata_size, bandwidth,
                           horizon, out_dir);
    if (exp->parsed()) return export_grid_cmd(config_path, out_file, tick, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace gridnav
