#ifndef GRIDNAV_IO_HPP
#define GRIDNAV_IO_HPP

#include <stdexcept>
#include <string>

#include "gridnav/camera.hpp"
#include "gridnav/costmap.hpp"
#include "gridnav/planner.hpp"

namespace gridnav {

/// Parse failure in a PGM stream; remembers where the bytes went wrong.
class PgmError : public std::runtime_error {
 public:
  PgmError(const std::string& what, size_t byte_offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

/// Depth images travel as 16-bit binary PGM, millimeters, 0 = no return.
DepthImage read_depth_pgm(const std::string& path);
void write_depth_pgm(const DepthImage& img, const std::string& path);

/// Grid snapshots are 8-bit binary PGM: cost 0 -> 255 (white), 100 -> 0
/// (black), linear in between, UNKNOWN -> 128. A sidecar text file carries
/// the GridSpec fields.
void write_grid_pgm(const OccupancyGrid& grid, const std::string& pgm_path);
void write_grid_sidecar(const GridSpec& spec, const std::string& txt_path);

void write_laserscan_csv(const LaserScan& scan, const std::string& path);
void write_pointcloud_csv(const PointCloud& cloud, const std::string& path);
void write_path_csv(const Path& path, const std::string& csv_path);

/// Shortest decimal form that round-trips a double; used by every CSV writer
/// so outputs are byte-stable.
std::string format_double(double v);

}  // namespace gridnav

#endif
