#ifndef GRIDNAV_GEOMETRY_HPP
#define GRIDNAV_GEOMETRY_HPP

#include <array>
#include <cmath>

namespace gridnav {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(const Point3& p) {
  return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

inline double planar_distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Planar robot pose: x, y in meters, yaw in radians wrapped to (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double yaw_) : x(x_), y(y_), yaw(normalize_angle(yaw_)) {}
};

/// Rigid-body transform mapping points from a child frame into its parent
/// frame. Rotation is a row-major 3x3 matrix, kept orthonormal; a counter of
/// accumulated compositions triggers re-orthonormalization on long chains.
struct RigidTransform {
  std::array<double, 9> rotation = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  Point3 translation;
  int compose_depth = 0;

  static RigidTransform identity() { return RigidTransform{}; }
  static RigidTransform from_translation(double x, double y, double z);
  /// Intrinsic z-y-x Euler angles, radians.
  static RigidTransform from_euler_zyx(double yaw, double pitch, double roll);

  bool rotation_orthonormal(double tol = 1e-9) const;
  void renormalize_rotation();
};

Point3 transform_point(const RigidTransform& t, const Point3& p);
/// Rotates a direction vector without translating it.
Point3 rotate_vector(const RigidTransform& t, const Point3& v);

RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& t);

/// Lifts a planar pose into 3D: yaw about +z, translation (x, y, z_offset).
RigidTransform pose2d_to_transform(const Pose2D& p, double z_offset);

/// Camera mount offset relative to the robot base: the camera body sits
/// 0.345 m ahead of and 0.28 m above the base origin, axes aligned.
RigidTransform default_camera_mount();

/// Maps optical-frame points (+z forward, +x right, +y down) into the
/// body/base axis convention (+x forward, +y left, +z up).
RigidTransform optical_to_body();

}  // namespace gridnav

#endif
