#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gridnav/camera.hpp"

using namespace gridnav;

namespace {

constexpr double kDeg = M_PI / 180.0;

DepthImage random_depth_image(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> depth(0.05, 6.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  DepthImage img(width, height);
  for (double& d : img.depths)
    if (coin(rng) > 0.2) d = depth(rng);
  return img;
}

// Reference conversion: deproject every band pixel and keep the per-column
// minimum range. Written independently of the production path.
std::vector<double> scan_oracle(const DepthImage& img, const CameraIntrinsics& k, int center,
                                int band_height, double range_min, double range_max) {
  std::vector<double> out(img.width, kNoReturn);
  const int first = center - (band_height - 1) / 2;
  for (int u = 0; u < img.width; ++u) {
    double best = kNoReturn;
    for (int v = first; v < first + band_height; ++v) {
      const double z = img.at(u, v);
      if (!is_return(z)) continue;
      const Point3 p = deproject(k, u, v, z);
      const double range = std::hypot(p.x, p.z);
      if (!is_return(best) || range < best) best = range;
    }
    if (is_return(best) && best >= range_min && best <= range_max) out[u] = best;
  }
  return out;
}

}  // namespace

TEST_CASE("intrinsics_from_fov focal lengths") {
  const CameraIntrinsics k = intrinsics_from_fov(160, 90, 87.0 * kDeg, 58.0 * kDeg);
  CHECK(k.fx == doctest::Approx(80.0 / std::tan(43.5 * kDeg)).epsilon(1e-12));
  CHECK(k.fx == doctest::Approx(84.303).epsilon(1e-4));
  CHECK(k.cx == doctest::Approx(79.5));
  CHECK(k.cy == doctest::Approx(44.5));
  // 160x90 is the 16:9 aspect the sensor reports.
  CHECK(160.0 / 90.0 == doctest::Approx(16.0 / 9.0));

  const CameraIntrinsics tiny = intrinsics_from_fov(2, 2, M_PI / 2.0, M_PI / 2.0);
  CHECK(tiny.fx == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("intrinsics_from_fov round-trips the field of view") {
  const CameraIntrinsics k = intrinsics_from_fov(640, 480, 70.0 * kDeg, 50.0 * kDeg);
  CHECK(k.hfov() == doctest::Approx(70.0 * kDeg).epsilon(1e-12));
  CHECK(k.vfov() == doctest::Approx(50.0 * kDeg).epsilon(1e-12));
}

TEST_CASE("intrinsics_from_fov rejects bad input") {
  CHECK_THROWS_AS(intrinsics_from_fov(0, 90, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(intrinsics_from_fov(160, -1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(intrinsics_from_fov(160, 90, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(intrinsics_from_fov(160, 90, 1.0, M_PI), std::invalid_argument);
}

TEST_CASE("frustum_contains clipping planes and angular limits") {
  const Frustum f{0.3, 3.0, 87.0 * kDeg, 58.0 * kDeg};
  CHECK(frustum_contains(f, {0.0, 0.0, 1.0}));
  CHECK_FALSE(frustum_contains(f, {0.0, 0.0, 0.2}));
  CHECK_FALSE(frustum_contains(f, {0.0, 0.0, 3.5}));
  // just inside / outside the horizontal half-angle at z = 1
  const double half = std::tan(43.5 * kDeg);
  CHECK(frustum_contains(f, {half * 0.999, 0.0, 1.0}));
  CHECK_FALSE(frustum_contains(f, {half * 1.001, 0.0, 1.0}));
  // angular membership is scale invariant while z stays in range
  const Point3 p{0.4, 0.2, 1.0};
  CHECK(frustum_contains(f, p) == frustum_contains(f, {2.0 * p.x, 2.0 * p.y, 2.0 * p.z}));
}

TEST_CASE("deproject at and off the principal point") {
  CameraIntrinsics k;
  k.width = 160;
  k.height = 90;
  k.fx = k.fy = 84.303;
  k.cx = 79.5;
  k.cy = 44.5;

  const Point3 center = deproject(k, k.cx, k.cy, 2.0);
  CHECK(center.x == doctest::Approx(0.0));
  CHECK(center.y == doctest::Approx(0.0));
  CHECK(center.z == doctest::Approx(2.0));

  const Point3 left = deproject(k, 0.0, k.cy, 1.0);
  CHECK(left.x == doctest::Approx((0.0 - 79.5) / 84.303).epsilon(1e-12));
  CHECK(left.x == doctest::Approx(-0.943).epsilon(1e-3));

  const Point3 once = deproject(k, 10.0, 20.0, 1.3);
  const Point3 twice = deproject(k, 10.0, 20.0, 2.6);
  CHECK(twice.x == doctest::Approx(2.0 * once.x).epsilon(1e-14));
  CHECK(twice.y == doctest::Approx(2.0 * once.y).epsilon(1e-14));

  CHECK_THROWS_AS(deproject(k, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(deproject(k, 0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("project inverts deproject to sub-nanopixel error") {
  const CameraIntrinsics k = intrinsics_from_fov(160, 90, 87.0 * kDeg, 58.0 * kDeg);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> du(0, 159), dv(0, 89);
  std::uniform_real_distribution<double> dz(0.05, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const int u = du(rng), v = dv(rng);
    const Point2 px = project(k, deproject(k, u, v, dz(rng)));
    CHECK(std::abs(px.x - u) <= 1e-9);
    CHECK(std::abs(px.y - v) <= 1e-9);
  }
}

TEST_CASE("depth_image_to_pointcloud") {
  const CameraIntrinsics k = intrinsics_from_fov(160, 90, 87.0 * kDeg, 58.0 * kDeg);
  const Frustum f{0.3, 3.0, k.hfov(), k.vfov()};

  SUBCASE("all-sentinel image gives an empty cloud") {
    CHECK(depth_image_to_pointcloud(DepthImage(160, 90), k, f).points.empty());
  }
  SUBCASE("single pixel near the principal point") {
    DepthImage img(160, 90);
    img.at(79, 44) = 1.0;
    const PointCloud cloud = depth_image_to_pointcloud(img, k, f);
    REQUIRE(cloud.points.size() == 1);
    CHECK(cloud.points[0].z == doctest::Approx(1.0));
    CHECK(std::abs(cloud.points[0].x) < 0.01);
  }
  SUBCASE("uniform depth beyond the far plane gives an empty cloud") {
    DepthImage img(160, 90);
    for (double& d : img.depths) d = 5.0;
    CHECK(depth_image_to_pointcloud(img, k, f).points.empty());
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(depth_image_to_pointcloud(DepthImage(10, 10), k, f), std::invalid_argument);
  }
  SUBCASE("every output point passes the frustum test") {
    std::mt19937_64 rng(17);
    const DepthImage img = random_depth_image(rng, 160, 90);
    for (const Point3& p : depth_image_to_pointcloud(img, k, f).points)
      CHECK(frustum_contains(f, p));
  }
}

TEST_CASE("depth_image_to_laserscan single on-axis column") {
  // Width 1 puts the only column exactly on the optical axis.
  const CameraIntrinsics k = intrinsics_from_fov(1, 3, 0.5, 0.5);
  DepthImage img(1, 3);
  img.at(0, 1) = 2.0;
  const LaserScan scan = depth_image_to_laserscan(img, k, 1, 1, 0.0, 10.0);
  REQUIRE(scan.ranges.size() == 1);
  CHECK(scan.angle(0) == doctest::Approx(0.0));
  CHECK(scan.ranges[0] == doctest::Approx(2.0));
}

TEST_CASE("depth_image_to_laserscan bearing and range arithmetic") {
  CameraIntrinsics k;
  k.width = 160;
  k.height = 90;
  k.fx = k.fy = 84.303;
  k.cx = 79.5;
  k.cy = 44.5;
  DepthImage img(160, 90);
  img.at(120, 45) = 2.0;

  const LaserScan scan = depth_image_to_laserscan(img, k, 45, 1, 0.0, 10.0);
  const double x = (120 - 79.5) / 84.303 * 2.0;
  CHECK(x == doctest::Approx(0.9608).epsilon(1e-4));
  CHECK(scan.ranges[120] == doctest::Approx(std::hypot(x, 2.0)).epsilon(1e-12));
  CHECK(scan.ranges[120] == doctest::Approx(2.2188).epsilon(1e-4));
  // The column's true bearing; the scan grid linearizes between the extreme
  // columns, so compare against the conversion math rather than angle(120).
  CHECK(std::atan2(x, 2.0) == doctest::Approx(0.4478).epsilon(1e-3));
  for (size_t i = 0; i < scan.ranges.size(); ++i) {
    if (i != 120) CHECK_FALSE(is_return(scan.ranges[i]));
  }
}

TEST_CASE("depth_image_to_laserscan matches the per-pixel oracle") {
  const CameraIntrinsics k = intrinsics_from_fov(160, 90, 87.0 * kDeg, 58.0 * kDeg);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const DepthImage img = random_depth_image(rng, 160, 90);
    const LaserScan scan = depth_image_to_laserscan(img, k, 45, 11, 0.3, 4.0);
    const auto expect = scan_oracle(img, k, 45, 11, 0.3, 4.0);
    REQUIRE(scan.ranges.size() == expect.size());
    for (size_t u = 0; u < expect.size(); ++u) {
      if (is_return(expect[u])) {
        REQUIRE(is_return(scan.ranges[u]));
        CHECK(std::abs(scan.ranges[u] - expect[u]) <= 1e-9);
      } else {
        CHECK_FALSE(is_return(scan.ranges[u]));
      }
    }
  }
}

TEST_CASE("depth_image_to_laserscan scan angles strictly increase") {
  const CameraIntrinsics k = intrinsics_from_fov(160, 90, 87.0 * kDeg, 58.0 * kDeg);
  std::mt19937_64 rng(3);
  const DepthImage img = random_depth_image(rng, 160, 90);
  const LaserScan scan = depth_image_to_laserscan(img, k, 45, 5, 0.0, 10.0);
  for (size_t i = 1; i < scan.ranges.size(); ++i) CHECK(scan.angle(i) > scan.angle(i - 1));
  CHECK(scan.ranges.size() ==
        static_cast<size_t>(
            std::floor((scan.angle_max - scan.angle_min) / scan.angle_increment + 1e-9)) + 1);
}

TEST_CASE("depth_image_to_laserscan rejects bad bands") {
  const CameraIntrinsics k = intrinsics_from_fov(160, 90, 87.0 * kDeg, 58.0 * kDeg);
  const DepthImage img(160, 90);
  CHECK_THROWS_AS(depth_image_to_laserscan(img, k, 45, 0, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(depth_image_to_laserscan(img, k, 0, 5, 0.0, 10.0), std::out_of_range);
  CHECK_THROWS_AS(depth_image_to_laserscan(img, k, 89, 4, 0.0, 10.0), std::out_of_range);
}

TEST_CASE("depth_image_to_laserscan filters ranges outside the window") {
  const CameraIntrinsics k = intrinsics_from_fov(3, 3, 0.5, 0.5);
  DepthImage img(3, 3);
  img.at(0, 1) = 0.05;  // too close once converted to range
  img.at(1, 1) = 1.0;
  img.at(2, 1) = 9.0;  // too far
  const LaserScan scan = depth_image_to_laserscan(img, k, 1, 1, 0.2, 5.0);
  CHECK_FALSE(is_return(scan.ranges[0]));
  CHECK(is_return(scan.ranges[1]));
  CHECK_FALSE(is_return(scan.ranges[2]));
}
