#include "gridnav/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gridnav {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

// Minimal P5 header scanner that tracks the byte offset for diagnostics.
class PgmScanner {
 public:
  explicit PgmScanner(std::string data) : data_(std::move(data)) {}

  size_t offset() const { return pos_; }
  const std::string& data() const { return data_; }

  void expect_magic() {
    if (data_.size() < 2 || data_[0] != 'P' || data_[1] != '5')
      throw PgmError("not a binary PGM (missing P5 magic)", 0);
    pos_ = 2;
  }

  int next_int() {
    skip_separators();
    if (pos_ >= data_.size()) throw PgmError("unexpected end of PGM header", pos_);
    if (!std::isdigit(static_cast<unsigned char>(data_[pos_])))
      throw PgmError("expected integer in PGM header", pos_);
    int value = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      value = value * 10 + (data_[pos_] - '0');
      if (value > 1 << 20) throw PgmError("PGM header value out of range", pos_);
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates the maxval from the raster.
  void begin_raster() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_])))
      throw PgmError("expected single whitespace before PGM raster", pos_);
    ++pos_;
  }

 private:
  void skip_separators() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string data_;
  size_t pos_ = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

DepthImage read_depth_pgm(const std::string& path) {
  PgmScanner scan(slurp(path));
  scan.expect_magic();
  const int width = scan.next_int();
  const int height = scan.next_int();
  const int maxval = scan.next_int();
  if (width <= 0 || height <= 0) throw PgmError("non-positive PGM dimensions", scan.offset());
  if (maxval != 65535) throw PgmError("depth PGM must have maxval 65535", scan.offset());
  scan.begin_raster();

  const std::string& data = scan.data();
  const size_t need = static_cast<size_t>(width) * height * 2;
  if (data.size() - scan.offset() < need)
    throw PgmError("PGM raster truncated", data.size());

  DepthImage img(width, height);
  size_t p = scan.offset();
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      const uint16_t hi = static_cast<uint8_t>(data[p]);
      const uint16_t lo = static_cast<uint8_t>(data[p + 1]);
      p += 2;
      const uint16_t mm = static_cast<uint16_t>((hi << 8) | lo);
      img.at(u, v) = mm == 0 ? kNoReturn : mm / 1000.0;
    }
  }
  return img;
}

void write_depth_pgm(const DepthImage& img, const std::string& path) {
  std::string bytes = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n65535\n";
  bytes.reserve(bytes.size() + static_cast<size_t>(img.width) * img.height * 2);
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      const double z = img.at(u, v);
      uint16_t mm = 0;
      if (is_return(z)) {
        const double clamped = std::min(std::lround(z * 1000.0), 65535L);
        mm = static_cast<uint16_t>(std::max(clamped, 1.0));
      }
      bytes.push_back(static_cast<char>(mm >> 8));
      bytes.push_back(static_cast<char>(mm & 0xff));
    }
  }
  dump(path, bytes);
}

void write_grid_pgm(const OccupancyGrid& grid, const std::string& pgm_path) {
  std::string bytes = "P5\n" + std::to_string(grid.spec.width) + " " +
                      std::to_string(grid.spec.height) + "\n255\n";
  // Row 0 of the grid is the bottom in world terms; PGM rasters go top-down.
  for (int y = grid.spec.height - 1; y >= 0; --y) {
    for (int x = 0; x < grid.spec.width; ++x) {
      const uint8_t c = grid.at({x, y});
      uint8_t pixel;
      if (c == kUnknownCost) {
        pixel = 128;
      } else {
        pixel = static_cast<uint8_t>(std::lround(255.0 * (1.0 - c / 100.0)));
      }
      bytes.push_back(static_cast<char>(pixel));
    }
  }
  dump(pgm_path, bytes);
}

void write_grid_sidecar(const GridSpec& spec, const std::string& txt_path) {
  std::ostringstream ss;
  ss << "width = " << spec.width << "\n"
     << "height = " << spec.height << "\n"
     << "resolution = " << format_double(spec.resolution) << "\n"
     << "origin_x = " << format_double(spec.origin.x) << "\n"
     << "origin_y = " << format_double(spec.origin.y) << "\n"
     << "origin_yaw = " << format_double(spec.origin.yaw) << "\n";
  dump(txt_path, ss.str());
}

void write_laserscan_csv(const LaserScan& scan, const std::string& path) {
  std::ostringstream ss;
  ss << "angle_rad,range_m\n";
  for (size_t i = 0; i < scan.ranges.size(); ++i)
    ss << format_double(scan.angle(i)) << "," << format_double(scan.ranges[i]) << "\n";
  dump(path, ss.str());
}

void write_pointcloud_csv(const PointCloud& cloud, const std::string& path) {
  std::ostringstream ss;
  ss << "x_m,y_m,z_m\n";
  for (const Point3& p : cloud.points)
    ss << format_double(p.x) << "," << format_double(p.y) << "," << format_double(p.z) << "\n";
  dump(path, ss.str());
}

void write_path_csv(const Path& path, const std::string& csv_path) {
  std::ostringstream ss;
  ss << "x_m,y_m\n";
  for (const Point2& wp : path.waypoints)
    ss << format_double(wp.x) << "," << format_double(wp.y) << "\n";
  dump(csv_path, ss.str());
}

}  // namespace gridnav
