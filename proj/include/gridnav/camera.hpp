#ifndef GRIDNAV_CAMERA_HPP
#define GRIDNAV_CAMERA_HPP

#include <limits>
#include <string>
#include <vector>

#include "gridnav/geometry.hpp"

namespace gridnav {

/// Sentinel for "no return" in depth images and laser scans.
inline constexpr double kNoReturn = std::numeric_limits<double>::quiet_NaN();

inline bool is_return(double v) { return std::isfinite(v) && v > 0.0; }

struct CameraIntrinsics {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  double hfov() const { return 2.0 * std::atan(width / (2.0 * fx)); }
  double vfov() const { return 2.0 * std::atan(height / (2.0 * fy)); }
};

struct Frustum {
  double near = 0.3;
  double far = 3.0;
  double hfov = 0.0;  // radians
  double vfov = 0.0;  // radians
};

/// Row-major z-depth image in meters; NaN marks pixels with no return.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> depths;

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), depths(static_cast<size_t>(w) * h, kNoReturn) {}

  double at(int u, int v) const { return depths[static_cast<size_t>(v) * width + u]; }
  double& at(int u, int v) { return depths[static_cast<size_t>(v) * width + u]; }
};

struct PointCloud {
  std::vector<Point3> points;
  std::string frame_id;
};

struct LaserScan {
  double angle_min = 0.0;
  double angle_max = 0.0;
  double angle_increment = 0.0;
  double range_min = 0.0;
  double range_max = 0.0;
  std::vector<double> ranges;

  double angle(size_t i) const { return angle_min + static_cast<double>(i) * angle_increment; }
};

/// Builds symmetric pinhole intrinsics from the image size and fields of
/// view. The principal point sits on the center pixel: cx = (width-1)/2.
CameraIntrinsics intrinsics_from_fov(int width, int height, double hfov, double vfov);

/// True iff p (camera optical frame) lies between the clipping planes and
/// inside both angular extents.
bool frustum_contains(const Frustum& f, const Point3& p);

/// Pixel + z-depth to a point in the camera optical frame.
Point3 deproject(const CameraIntrinsics& k, double u, double v, double depth);

/// Inverse of deproject: optical-frame point to pixel coordinates.
Point2 project(const CameraIntrinsics& k, const Point3& p);

/// One point per valid pixel whose deprojection passes the frustum test.
PointCloud depth_image_to_pointcloud(const DepthImage& img, const CameraIntrinsics& k,
                                     const Frustum& f, const std::string& frame_id = "camera");

/// Collapses a horizontal band of rows to a planar scan: per column, the
/// minimum valid depth becomes one ray at bearing atan2(x, z).
LaserScan depth_image_to_laserscan(const DepthImage& img, const CameraIntrinsics& k,
                                   int band_center_row, int band_height, double range_min,
                                   double range_max);

}  // namespace gridnav

#endif
