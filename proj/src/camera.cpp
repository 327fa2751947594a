#include "gridnav/camera.hpp"

#include <stdexcept>

namespace gridnav {

CameraIntrinsics intrinsics_from_fov(int width, int height, double hfov, double vfov) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("intrinsics_from_fov: non-positive image size");
  if (hfov <= 0.0 || hfov >= M_PI || vfov <= 0.0 || vfov >= M_PI)
    throw std::invalid_argument("intrinsics_from_fov: fov out of (0, pi)");
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.fx = (width / 2.0) / std::tan(hfov / 2.0);
  k.fy = (height / 2.0) / std::tan(vfov / 2.0);
  k.cx = (width - 1) / 2.0;
  k.cy = (height - 1) / 2.0;
  return k;
}

bool frustum_contains(const Frustum& f, const Point3& p) {
  if (p.z < f.near || p.z > f.far) return false;
  if (std::abs(std::atan2(p.x, p.z)) > f.hfov / 2.0) return false;
  if (std::abs(std::atan2(p.y, p.z)) > f.vfov / 2.0) return false;
  return true;
}

Point3 deproject(const CameraIntrinsics& k, double u, double v, double depth) {
  if (!(depth > 0.0)) throw std::invalid_argument("deproject: depth must be positive");
  return {(u - k.cx) / k.fx * depth, (v - k.cy) / k.fy * depth, depth};
}

Point2 project(const CameraIntrinsics& k, const Point3& p) {
  return {k.cx + k.fx * p.x / p.z, k.cy + k.fy * p.y / p.z};
}

PointCloud depth_image_to_pointcloud(const DepthImage& img, const CameraIntrinsics& k,
                                     const Frustum& f, const std::string& frame_id) {
  if (img.width != k.width || img.height != k.height)
    throw std::invalid_argument("depth_image_to_pointcloud: image size does not match intrinsics");
  PointCloud cloud;
  cloud.frame_id = frame_id;
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      const double z = img.at(u, v);
      if (!is_return(z)) continue;
      const Point3 p = deproject(k, u, v, z);
      if (frustum_contains(f, p)) cloud.points.push_back(p);
    }
  }
  return cloud;
}

LaserScan depth_image_to_laserscan(const DepthImage& img, const CameraIntrinsics& k,
                                   int band_center_row, int band_height, double range_min,
                                   double range_max) {
  if (band_height < 1) throw std::invalid_argument("depth_image_to_laserscan: band_height must be >= 1");
  const int first_row = band_center_row - (band_height - 1) / 2;
  const int last_row = first_row + band_height - 1;
  if (first_row < 0 || last_row >= img.height)
    throw std::out_of_range("depth_image_to_laserscan: band exceeds image rows");
  if (img.width != k.width || img.height != k.height)
    throw std::invalid_argument("depth_image_to_laserscan: image size does not match intrinsics");

  LaserScan scan;
  scan.range_min = range_min;
  scan.range_max = range_max;
  scan.ranges.resize(img.width, kNoReturn);

  // Column 0 looks furthest left (most negative bearing), so walking columns
  // in order yields strictly increasing angles.
  scan.angle_min = std::atan2((0 - k.cx) / k.fx, 1.0);
  scan.angle_max = std::atan2((img.width - 1 - k.cx) / k.fx, 1.0);
  scan.angle_increment =
      img.width > 1 ? (scan.angle_max - scan.angle_min) / (img.width - 1) : M_PI;

  for (int u = 0; u < img.width; ++u) {
    double min_z = kNoReturn;
    for (int v = first_row; v <= last_row; ++v) {
      const double z = img.at(u, v);
      if (!is_return(z)) continue;
      if (!is_return(min_z) || z < min_z) min_z = z;
    }
    if (!is_return(min_z)) continue;
    const double x = (u - k.cx) / k.fx * min_z;
    const double range = std::hypot(x, min_z);
    if (range < range_min || range > range_max) continue;
    scan.ranges[u] = range;
  }
  return scan;
}

}  // namespace gridnav
