#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gridnav/costmap.hpp"

using namespace gridnav;

namespace {

GridSpec spec_at_origin(int w, int h, double res) { return GridSpec{w, h, res, Pose2D{}}; }

OccupancyGrid random_layer(std::mt19937_64& rng, const GridSpec& spec) {
  std::uniform_int_distribution<int> pick(0, 5);
  OccupancyGrid g(spec);
  for (uint8_t& c : g.cost) {
    const int v = pick(rng);
    c = v == 0 ? kUnknownCost : static_cast<uint8_t>((v - 1) * 25);
  }
  return g;
}

}  // namespace

TEST_CASE("world_to_cell floor convention") {
  const GridSpec spec = spec_at_origin(100, 100, 0.05);
  auto c = world_to_cell(spec, 0.26, 0.0);
  REQUIRE(c.has_value());
  CHECK(*c == CellIndex{5, 0});

  CHECK_FALSE(world_to_cell(spec, -0.01, 0.0).has_value());
  CHECK_FALSE(world_to_cell(spec, 0.0, 100 * 0.05 + 0.01).has_value());

  const GridSpec coarse = spec_at_origin(10, 10, 1.0);
  auto boundary = world_to_cell(coarse, 1.0, 0.0);
  REQUIRE(boundary.has_value());
  CHECK(boundary->x == 1);  // boundary point lands in the upper cell
}

TEST_CASE("world_to_cell honors a rotated grid origin") {
  GridSpec spec = spec_at_origin(10, 10, 1.0);
  spec.origin = Pose2D{0.0, 0.0, M_PI / 2.0};
  // Grid +x axis points along world +y.
  auto c = world_to_cell(spec, 0.0, 2.5);
  REQUIRE(c.has_value());
  CHECK(*c == CellIndex{2, 0});

  // Cell (2,0) spans grid x [2,3), grid y [0,1); its center (2.5, 0.5) in
  // grid coordinates lands at world (-0.5, 2.5) under the quarter-turn.
  OccupancyGrid grid(spec);
  const Point2 back = grid.cell_center(*c);
  CHECK(back.x == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(back.y == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("mark_from_pointcloud height band and range gate") {
  const GridSpec spec{200, 200, 0.05, Pose2D{-5.0, -5.0, 0.0}};
  const ObstacleLayerParams params;  // stock camera-layer defaults
  const Point2 sensor{0.0, 0.0};

  SUBCASE("inside band and range marks one cell") {
    OccupancyGrid grid(spec, kFreeCost);
    PointCloud cloud;
    cloud.points.push_back({1.0, 0.5, 0.6});
    CHECK(mark_from_pointcloud(grid, cloud, sensor, params) == 1);
    CHECK(grid.at(*world_to_cell(spec, 1.0, 0.5)) == kLethalCost);
  }
  SUBCASE("below the height band: untouched") {
    OccupancyGrid grid(spec, kFreeCost);
    PointCloud cloud;
    cloud.points.push_back({1.0, 0.0, 0.2});
    CHECK(mark_from_pointcloud(grid, cloud, sensor, params) == 0);
    CHECK(grid.at(*world_to_cell(spec, 1.0, 0.0)) == kFreeCost);
  }
  SUBCASE("beyond obstacle_range: untouched") {
    OccupancyGrid grid(spec, kFreeCost);
    PointCloud cloud;
    cloud.points.push_back({2.5, 0.0, 0.6});
    CHECK(mark_from_pointcloud(grid, cloud, sensor, params) == 0);
  }
  SUBCASE("band edges are inclusive") {
    OccupancyGrid grid(spec, kFreeCost);
    PointCloud cloud;
    cloud.points.push_back({1.0, 0.0, 0.35});
    cloud.points.push_back({1.5, 0.0, 1.0});
    cloud.points.push_back({2.0, 0.0, 0.5});  // planar distance exactly 2.0
    CHECK(mark_from_pointcloud(grid, cloud, sensor, params) == 3);
  }
  SUBCASE("marking disabled is a no-op") {
    OccupancyGrid grid(spec, kFreeCost);
    ObstacleLayerParams off = params;
    off.marking = false;
    PointCloud cloud;
    cloud.points.push_back({1.0, 0.5, 0.6});
    CHECK(mark_from_pointcloud(grid, cloud, sensor, off) == 0);
  }
  SUBCASE("points outside the grid are skipped") {
    OccupancyGrid grid({10, 10, 0.05, Pose2D{}}, kFreeCost);
    PointCloud cloud;
    cloud.points.push_back({-1.0, 0.0, 0.6});
    CHECK(mark_from_pointcloud(grid, cloud, sensor, params) == 0);
  }
}

TEST_CASE("clear_by_raytrace spares the endpoint cell") {
  const GridSpec spec = spec_at_origin(10, 10, 1.0);
  OccupancyGrid grid(spec, kLethalCost);
  const ObstacleLayerParams params{1.0, 0.35, 8.0, 8.0, true, true};
  const Point2 endpoints[] = {{3.5, 3.5}};
  const size_t cleared = clear_by_raytrace(grid, {0.5, 0.5}, endpoints, params);
  CHECK(cleared == 3);
  CHECK(grid.at({0, 0}) == kFreeCost);
  CHECK(grid.at({1, 1}) == kFreeCost);
  CHECK(grid.at({2, 2}) == kFreeCost);
  CHECK(grid.at({3, 3}) == kLethalCost);
}

TEST_CASE("clear_by_raytrace degenerate ray clears nothing") {
  OccupancyGrid grid(spec_at_origin(10, 10, 1.0), kLethalCost);
  const ObstacleLayerParams params;
  const Point2 endpoints[] = {{0.5, 0.5}};
  CHECK(clear_by_raytrace(grid, {0.5, 0.5}, endpoints, params) == 0);
}

TEST_CASE("clear_by_raytrace truncates to raytrace_range") {
  const GridSpec spec{200, 200, 0.05, Pose2D{-5.0, -5.0, 0.0}};
  OccupancyGrid grid(spec, kUnknownCost);
  const ObstacleLayerParams params;  // raytrace_range 2.0
  const Point2 endpoints[] = {{5.0, 0.0}};
  clear_by_raytrace(grid, {0.0, 0.0}, endpoints, params);
  // Sensor sits at cell (100,100); the truncated endpoint (2,0) maps to cell
  // (140,100), which must survive along with everything beyond it.
  CHECK(grid.at({139, 100}) == kFreeCost);
  CHECK(grid.at({140, 100}) == kUnknownCost);
  CHECK(grid.at({141, 100}) == kUnknownCost);
}

TEST_CASE("clear_by_raytrace honors the clearing flag") {
  OccupancyGrid grid(spec_at_origin(10, 10, 1.0), kLethalCost);
  ObstacleLayerParams params;
  params.clearing = false;
  const Point2 endpoints[] = {{8.5, 0.5}};
  CHECK(clear_by_raytrace(grid, {0.5, 0.5}, endpoints, params) == 0);
  CHECK(grid.at({3, 0}) == kLethalCost);
}

TEST_CASE("mark_from_laserscan marks the return and clears the ray") {
  const GridSpec spec = spec_at_origin(40, 40, 0.05);
  OccupancyGrid grid(spec, kUnknownCost);
  LaserScan scan;
  scan.angle_min = scan.angle_max = 0.0;
  scan.angle_increment = 1.0;
  scan.range_min = 0.0;
  scan.range_max = 10.0;
  scan.ranges = {1.0};
  const ObstacleLayerParams params;
  CHECK(mark_from_laserscan(grid, scan, Pose2D{0.0, 0.0, 0.0}, params) == 1);
  CHECK(grid.at({20, 0}) == kLethalCost);
  for (int x = 0; x < 20; ++x) CHECK(grid.at({x, 0}) == kFreeCost);
  CHECK(grid.at({21, 0}) == kUnknownCost);
}

TEST_CASE("mark_from_laserscan all-sentinel scan clears to raytrace_range") {
  const GridSpec spec{100, 100, 0.05, Pose2D{-2.5, -2.5, 0.0}};
  OccupancyGrid grid(spec, kUnknownCost);
  LaserScan scan;
  scan.angle_min = -M_PI / 2.0;
  scan.angle_increment = M_PI / 2.0;
  scan.angle_max = M_PI;
  scan.range_min = 0.0;
  scan.range_max = 10.0;
  scan.ranges = {kNoReturn, kNoReturn, kNoReturn, kNoReturn};
  const ObstacleLayerParams params;
  CHECK(mark_from_laserscan(grid, scan, Pose2D{0.0, 0.0, 0.0}, params) == 0);
  // Clearing reaches toward raytrace_range = 2 m along each bearing.
  CHECK(grid.at(*world_to_cell(spec, 1.5, 0.0)) == kFreeCost);
  CHECK(grid.at(*world_to_cell(spec, 0.0, 1.5)) == kFreeCost);
  CHECK(grid.at(*world_to_cell(spec, 0.0, -1.5)) == kFreeCost);
  CHECK(grid.at(*world_to_cell(spec, -1.5, 0.0)) == kFreeCost);
}

TEST_CASE("mark_from_laserscan return beyond obstacle_range clears without marking") {
  const GridSpec spec{200, 200, 0.05, Pose2D{-5.0, -5.0, 0.0}};
  OccupancyGrid grid(spec, kUnknownCost);
  LaserScan scan;
  scan.angle_min = scan.angle_max = 0.0;
  scan.angle_increment = 1.0;
  scan.range_min = 0.0;
  scan.range_max = 10.0;
  scan.ranges = {1.5};
  ObstacleLayerParams params;
  params.obstacle_range = 1.0;
  params.raytrace_range = 2.0;
  CHECK(mark_from_laserscan(grid, scan, Pose2D{0.0, 0.0, 0.0}, params) == 0);
  CHECK(grid.at(*world_to_cell(spec, 1.4, 0.0)) == kFreeCost);
  CHECK(grid.at(*world_to_cell(spec, 1.5, 0.0)) == kUnknownCost);  // endpoint spared, unmarked
}

TEST_CASE("in-range returns stay marked after a full scan update") {
  // Rays at many bearings; clearing runs before marking, so no ray erases
  // another return's endpoint.
  const GridSpec spec{200, 200, 0.05, Pose2D{-5.0, -5.0, 0.0}};
  OccupancyGrid grid(spec, kUnknownCost);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> range(0.3, 1.9);
  LaserScan scan;
  scan.angle_min = -M_PI;
  scan.angle_increment = M_PI / 90.0;
  scan.angle_max = scan.angle_min + 179 * scan.angle_increment;
  scan.range_min = 0.0;
  scan.range_max = 8.0;
  for (int i = 0; i < 180; ++i) scan.ranges.push_back(range(rng));
  const ObstacleLayerParams params;
  const Pose2D sensor{0.0, 0.0, 0.0};
  mark_from_laserscan(grid, scan, sensor, params);
  for (size_t i = 0; i < scan.ranges.size(); ++i) {
    const double a = scan.angle(i);
    const double r = scan.ranges[i];
    if (r > params.obstacle_range) continue;
    const auto cell = world_to_cell(spec, r * std::cos(a), r * std::sin(a));
    REQUIRE(cell.has_value());
    CHECK(grid.at(*cell) == kLethalCost);
  }
}

TEST_CASE("inflation cost law") {
  const InflationParams params{0.25, 0.55, 10.0};
  CHECK(inflation_cost(0.0, params) == 100);
  CHECK(inflation_cost(0.1, params) == 99);
  CHECK(inflation_cost(0.25, params) == 99);
  CHECK(inflation_cost(0.35, params) == 36);  // round(98 * e^-1)
  CHECK(inflation_cost(0.56, params) == 0);
}

TEST_CASE("inflate leaves lethal-free grids unchanged") {
  OccupancyGrid grid(spec_at_origin(20, 20, 0.05), kFreeCost);
  grid.at({3, 3}) = 40;
  const OccupancyGrid out = inflate(grid, InflationParams{});
  CHECK(out.cost == grid.cost);
}

TEST_CASE("inflate spreads cost around a lethal cell") {
  const GridSpec spec = spec_at_origin(40, 40, 0.05);
  OccupancyGrid grid(spec, kFreeCost);
  grid.at({20, 20}) = kLethalCost;
  const InflationParams params{0.25, 0.55, 10.0};
  const OccupancyGrid out = inflate(grid, params);
  CHECK(out.at({20, 20}) == 100);
  CHECK(out.at({21, 20}) == 99);           // d = 0.05
  CHECK(out.at({25, 20}) == 99);           // d = 0.25
  CHECK(out.at({27, 20}) == 36);           // d = 0.35
  CHECK(out.at({32, 20}) == 0);            // d = 0.60 > inflation radius
  CHECK(out.at({24, 23}) == 99);           // d = 0.25 diagonal
}

TEST_CASE("inflate is monotone in the inflation radius") {
  std::mt19937_64 rng(13);
  const GridSpec spec = spec_at_origin(30, 30, 0.05);
  std::uniform_int_distribution<int> cell(0, 29);
  for (int trial = 0; trial < 20; ++trial) {
    OccupancyGrid grid(spec, kFreeCost);
    for (int i = 0; i < 12; ++i) grid.at({cell(rng), cell(rng)}) = kLethalCost;
    const OccupancyGrid small = inflate(grid, InflationParams{0.1, 0.3, 10.0});
    const OccupancyGrid big = inflate(grid, InflationParams{0.1, 0.6, 10.0});
    for (size_t i = 0; i < grid.cost.size(); ++i) CHECK(big.cost[i] >= small.cost[i]);
  }
}

TEST_CASE("all costs stay within [0, 100] after a mark/clear/inflate cycle") {
  std::mt19937_64 rng(19);
  const GridSpec spec{60, 60, 0.05, Pose2D{-1.5, -1.5, 0.0}};
  OccupancyGrid grid(spec, kUnknownCost);
  std::uniform_real_distribution<double> coord(-1.4, 1.4);
  PointCloud cloud;
  for (int i = 0; i < 200; ++i) cloud.points.push_back({coord(rng), coord(rng), 0.5});
  std::vector<Point2> ends;
  for (int i = 0; i < 100; ++i) ends.push_back({coord(rng), coord(rng)});
  const ObstacleLayerParams params;
  clear_by_raytrace(grid, {0.0, 0.0}, ends, params);
  mark_from_pointcloud(grid, cloud, {0.0, 0.0}, params);
  const OccupancyGrid out = inflate(grid, InflationParams{});
  for (uint8_t c : out.cost) CHECK((c <= 100 || c == kUnknownCost));
}

TEST_CASE("compose_layers max semantics with UNKNOWN identity") {
  const GridSpec spec = spec_at_origin(2, 2, 1.0);
  OccupancyGrid a(spec, kFreeCost), b(spec, kFreeCost);
  a.at({0, 0}) = 0;
  b.at({0, 0}) = 100;
  a.at({1, 0}) = kUnknownCost;
  b.at({1, 0}) = 40;
  a.at({0, 1}) = kUnknownCost;
  b.at({0, 1}) = kUnknownCost;
  const OccupancyGrid layers[] = {a, b};
  const OccupancyGrid out = compose_layers(layers);
  CHECK(out.at({0, 0}) == 100);
  CHECK(out.at({1, 0}) == 40);
  CHECK(out.at({0, 1}) == kUnknownCost);

  const OccupancyGrid single[] = {a};
  CHECK(compose_layers(single).cost == a.cost);
}

TEST_CASE("compose_layers rejects mismatched specs") {
  const OccupancyGrid layers[] = {OccupancyGrid(spec_at_origin(2, 2, 1.0)),
                                  OccupancyGrid(spec_at_origin(3, 2, 1.0))};
  CHECK_THROWS_AS(compose_layers(layers), std::invalid_argument);
}

TEST_CASE("compose_layers is a commutative, associative, idempotent max") {
  std::mt19937_64 rng(101);
  const GridSpec spec = spec_at_origin(8, 8, 0.5);
  for (int trial = 0; trial < 25; ++trial) {
    const OccupancyGrid a = random_layer(rng, spec);
    const OccupancyGrid b = random_layer(rng, spec);
    const OccupancyGrid c = random_layer(rng, spec);
    const OccupancyGrid ab[] = {a, b};
    const OccupancyGrid ba[] = {b, a};
    CHECK(compose_layers(ab).cost == compose_layers(ba).cost);

    const OccupancyGrid ab_c[] = {compose_layers(ab), c};
    const OccupancyGrid bc[] = {b, c};
    const OccupancyGrid a_bc[] = {a, compose_layers(bc)};
    CHECK(compose_layers(ab_c).cost == compose_layers(a_bc).cost);

    const OccupancyGrid aa[] = {a, a};
    CHECK(compose_layers(aa).cost == a.cost);
  }
}
