#include "gridnav/geometry.hpp"

namespace gridnav {

namespace {

constexpr int kRenormalizeAfter = 32;

}  // namespace

double normalize_angle(double angle) {
  double a = std::fmod(angle + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

RigidTransform RigidTransform::from_translation(double x, double y, double z) {
  RigidTransform t;
  t.translation = {x, y, z};
  return t;
}

RigidTransform RigidTransform::from_euler_zyx(double yaw, double pitch, double roll) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  RigidTransform t;
  t.rotation = {cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
                sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
                -sp,     cp * sr,                cp * cr};
  return t;
}

bool RigidTransform::rotation_orthonormal(double tol) const {
  const auto& r = rotation;
  // R * R^T == I
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += r[3 * i + k] * r[3 * j + k];
      const double expect = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot - expect) > tol) return false;
    }
  }
  const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) -
                     r[1] * (r[3] * r[8] - r[5] * r[6]) +
                     r[2] * (r[3] * r[7] - r[4] * r[6]);
  return std::abs(det - 1.0) <= tol;
}

void RigidTransform::renormalize_rotation() {
  // Gram-Schmidt on the rows.
  auto& r = rotation;
  auto scale_row = [&](int i, double s) {
    r[3 * i] *= s;
    r[3 * i + 1] *= s;
    r[3 * i + 2] *= s;
  };
  auto row_dot = [&](int i, int j) {
    return r[3 * i] * r[3 * j] + r[3 * i + 1] * r[3 * j + 1] + r[3 * i + 2] * r[3 * j + 2];
  };
  scale_row(0, 1.0 / std::sqrt(row_dot(0, 0)));
  const double d01 = row_dot(0, 1);
  for (int k = 0; k < 3; ++k) r[3 + k] -= d01 * r[k];
  scale_row(1, 1.0 / std::sqrt(row_dot(1, 1)));
  // Third row: cross product of the first two keeps det +1.
  r[6] = r[1] * r[5] - r[2] * r[4];
  r[7] = r[2] * r[3] - r[0] * r[5];
  r[8] = r[0] * r[4] - r[1] * r[3];
  compose_depth = 0;
}

Point3 transform_point(const RigidTransform& t, const Point3& p) {
  const auto& r = t.rotation;
  return {r[0] * p.x + r[1] * p.y + r[2] * p.z + t.translation.x,
          r[3] * p.x + r[4] * p.y + r[5] * p.z + t.translation.y,
          r[6] * p.x + r[7] * p.y + r[8] * p.z + t.translation.z};
}

Point3 rotate_vector(const RigidTransform& t, const Point3& v) {
  const auto& r = t.rotation;
  return {r[0] * v.x + r[1] * v.y + r[2] * v.z,
          r[3] * v.x + r[4] * v.y + r[5] * v.z,
          r[6] * v.x + r[7] * v.y + r[8] * v.z};
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform out;
  const auto& ra = a.rotation;
  const auto& rb = b.rotation;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += ra[3 * i + k] * rb[3 * k + j];
      out.rotation[3 * i + j] = s;
    }
  }
  out.translation = transform_point(a, b.translation);
  out.compose_depth = a.compose_depth + b.compose_depth + 1;
  if (out.compose_depth > kRenormalizeAfter) out.renormalize_rotation();
  return out;
}

RigidTransform invert(const RigidTransform& t) {
  RigidTransform out;
  const auto& r = t.rotation;
  // Transpose of an orthonormal matrix is its inverse.
  out.rotation = {r[0], r[3], r[6], r[1], r[4], r[7], r[2], r[5], r[8]};
  const Point3 nt = rotate_vector(out, t.translation);
  out.translation = {-nt.x, -nt.y, -nt.z};
  out.compose_depth = t.compose_depth;
  return out;
}

RigidTransform pose2d_to_transform(const Pose2D& p, double z_offset) {
  const double c = std::cos(p.yaw), s = std::sin(p.yaw);
  RigidTransform t;
  t.rotation = {c, -s, 0, s, c, 0, 0, 0, 1};
  t.translation = {p.x, p.y, z_offset};
  return t;
}

RigidTransform default_camera_mount() {
  return RigidTransform::from_translation(0.345, 0.0, 0.28);
}

RigidTransform optical_to_body() {
  RigidTransform t;
  t.rotation = {0, 0, 1, -1, 0, 0, 0, -1, 0};
  return t;
}

}  // namespace gridnav
