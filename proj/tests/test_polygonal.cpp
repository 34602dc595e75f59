#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcurve/polygonal.hpp"

#include <cmath>

using namespace tcurve;

namespace {

std::vector<double> uniform_partition(const SampledCurve& curve, int count, bool with_end) {
  std::vector<double> part;
  for (int i = 0; i < count; ++i) part.push_back(curve.length * double(i) / double(count));
  if (with_end) part.push_back(curve.length);
  return part;
}

SampledCurve octant_curve(int n) {
  std::vector<ChartPoint> verts = {
      {3.0 * M_PI / 4.0, 0.0}, {M_PI / 2.0, M_PI / 2.0}, {M_PI / 4.0, 0.0}};
  return geodesic_polygon_curve(sphere_chart(), verts, n);
}

}  // namespace

TEST_SUITE("polygonal") {

TEST_CASE("inscription in a parallel") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  GeodesicPolygonal poly = inscribe(par, uniform_partition(par, 4, false));
  CHECK(poly.closed);
  CHECK(poly.vertex.size() == 4);
  CHECK(poly.arcs.size() == 4);
  for (const auto& arc : poly.arcs) CHECK(arc.length < par.length / 4.0);
}

TEST_CASE("mesh of uniform partitions") {
  SampledCurve par = parallel_curve(M_PI / 4.0, 4096);
  for (int n : {4, 8, 16, 32}) {
    GeodesicPolygonal poly = inscribe(par, uniform_partition(par, n, false));
    CHECK(mesh_of(par, poly) == doctest::Approx(par.length / n).epsilon(1e-9));
  }
}

TEST_CASE("modulus of a single geodesic arc is its length") {
  auto sphere = sphere_chart();
  GeodesicArc shot = geodesic_shoot(*sphere, {M_PI / 2, 0.0}, Vec2(0.0, 1.0), 0.8);
  SampledCurve curve =
      geodesic_polygon_curve(sphere, {{M_PI / 2, 0.0}, shot.end()}, 512, /*closed=*/false);
  GeodesicPolygonal poly = inscribe(curve, {0.0, curve.length});
  CHECK(modulus_of(curve, poly) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("modulus shrinks monotonically and stays under the arc length") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  double prev = 1e300;
  for (int n : {4, 8, 16, 32, 64}) {
    GeodesicPolygonal poly = inscribe(par, uniform_partition(par, n, false));
    double mod = modulus_of(par, poly);
    CHECK(mod < prev + 1e-12);
    CHECK(mod <= par.length / n + 1e-9);
    prev = mod;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("rotation of the octant triangle is 3 pi / 2") {
  SampledCurve tri = octant_curve(2048);
  GeodesicPolygonal poly = inscribe(tri, {0.0, tri.jumps[0].s, tri.jumps[1].s});
  CHECK(rotation_of(poly) == doctest::Approx(1.5 * M_PI).epsilon(1e-9));
  // all three corners turn left by a right angle
  for (double t : turning_angles(poly)) CHECK(t == doctest::Approx(M_PI / 2).epsilon(1e-9));
}

TEST_CASE("rotation of a flat-chart square is 2 pi") {
  auto flat = flat_polar_chart();
  std::vector<ChartPoint> verts;
  const double sq[4][2] = {{2.0, -0.5}, {3.0, -0.5}, {3.0, 0.5}, {2.0, 0.5}};
  for (auto& v : sq) {
    Vec2 p(v[0], v[1]);
    verts.push_back({p.norm(), std::atan2(p.y(), p.x())});
  }
  SampledCurve square = geodesic_polygon_curve(flat, verts, 2048);
  std::vector<double> corner_params = {0.0};
  for (const auto& j : square.jumps)
    if (!j.at_junction) corner_params.push_back(j.s);
  GeodesicPolygonal poly = inscribe(square, corner_params);
  CHECK(rotation_of(poly) == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
}

TEST_CASE("rotation of nested refinements: decreasing above pi on the sphere") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  double prev = 1e300;
  for (int n : {4, 8, 16, 32, 64, 128, 256}) {
    double rot = rotation_of(inscribe(par, uniform_partition(par, n, false)));
    CHECK(rot <= prev + 1e-12);
    CHECK(rot > M_PI);
    prev = rot;
  }
  CHECK(prev == doctest::Approx(M_PI).epsilon(1e-3));
}

TEST_CASE("a polygonal source curve is a fixed point of inscription") {
  SampledCurve tri = octant_curve(4096);
  std::vector<double> corner_params = {0.0};
  for (const auto& j : tri.jumps)
    if (!j.at_junction) corner_params.push_back(j.s);
  GeodesicPolygonal poly = inscribe(tri, corner_params);
  REQUIRE(poly.arcs.size() == 3);
  // arc start directions must match the curve's one-sided tangents at corners
  Vec2 d0 = poly.arcs[0].direction;
  CHECK((d0 - tri.velocity[0]).norm() <= 1e-8);
  for (size_t k = 0; k + 1 < poly.arcs.size(); ++k) {
    const TangentJump& j = tri.jumps[k];
    CHECK((poly.arcs[k + 1].direction - j.out_dir).norm() <= 1e-8);
    CHECK((poly.arcs[k].end_direction() - j.in_dir).norm() <= 1e-8);
  }
}

TEST_CASE("corner angles agree between the chart metric and the embedding") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  GeodesicPolygonal poly = inscribe(par, uniform_partition(par, 12, false));
  std::vector<double> turns = turning_angles(poly);
  for (size_t i = 0; i < poly.arcs.size(); ++i) {
    const GeodesicArc& in = poly.arcs[i];
    const GeodesicArc& out = poly.arcs[(i + 1) % poly.arcs.size()];
    Vec3 tin = embed_tangent(*par.chart, in.end(), in.end_direction());
    Vec3 tout = embed_tangent(*par.chart, out.start, out.direction);
    CHECK(std::abs(turns[i]) == doctest::Approx(sphere_angle(tin, tout)).epsilon(1e-9));
  }
}

TEST_CASE("chart rotation is dominated by the chord-polyline rotation") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  for (int n : {16, 32, 64}) {
    GeodesicPolygonal poly = inscribe(par, uniform_partition(par, n, false));
    CHECK(rotation_of(poly) <= euclidean_rotation_of(poly) + 1e-12);
  }
}

TEST_CASE("planar square chord rotation is 2 pi") {
  std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  CHECK(euclidean_rotation_of(pts, true) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  std::vector<Vec3> bad = {{0, 0, 0}, {0, 0, 0}, {1, 1, 0}};
  CHECK_THROWS_AS(euclidean_rotation_of(bad, false), ComputationError);
}

TEST_CASE("uniform doubling schedule counts and nesting") {
  SampledCurve par = parallel_curve(M_PI / 4.0, 4096);
  RefinementStrategy strat;
  strat.initial = 4;
  strat.rounds = 5;
  auto schedule = refinement_schedule(par, strat);
  REQUIRE(schedule.size() == 5);
  size_t expect = 4;
  for (const auto& part : schedule) {
    CHECK(part.size() == expect);
    expect *= 2;
  }
  for (size_t k = 0; k + 1 < schedule.size(); ++k)
    for (double s : schedule[k]) {
      bool found = false;
      for (double t : schedule[k + 1]) found |= std::abs(s - t) < 1e-12;
      CHECK(found);  // nested partitions
    }
}

TEST_CASE("modulus-target schedule meets its targets") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  RefinementStrategy strat;
  strat.kind = RefinementStrategy::Kind::ModulusTargets;
  strat.initial = 4;
  strat.modulus_targets = {0.5, 0.25};
  auto schedule = refinement_schedule(par, strat);
  REQUIRE(schedule.size() == 2);
  double prev_mesh = 1e300;
  for (size_t k = 0; k < 2; ++k) {
    GeodesicPolygonal poly = inscribe(par, schedule[k]);
    CHECK(modulus_of(par, poly) <= strat.modulus_targets[k] + 1e-9);
    // driving the modulus down drives the mesh down with it
    double mesh = mesh_of(par, poly);
    CHECK(mesh < prev_mesh);
    prev_mesh = mesh;
  }
  strat.modulus_targets = {1e-6};  // below grid resolution
  CHECK_THROWS_AS(refinement_schedule(par, strat), ValidationError);
}

}  // TEST_SUITE
