#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcurve/analysis.hpp"
#include "tcurve/bv.hpp"

#include <cmath>

using namespace tcurve;

namespace {

SampledCurve octant_curve(int n) {
  std::vector<ChartPoint> verts = {
      {3.0 * M_PI / 4.0, 0.0}, {M_PI / 2.0, M_PI / 2.0}, {M_PI / 4.0, 0.0}};
  return geodesic_polygon_curve(sphere_chart(), verts, n);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("total intrinsic curvature of a parallel") {
  SampledCurve par = parallel_curve(M_PI / 4.0, 4096);
  TCReport report = total_intrinsic_curvature(par);
  CHECK(report.refinement.rows.size() == 6);
  CHECK(report.estimate == doctest::Approx(2.0 * M_PI * std::cos(M_PI / 4.0)).epsilon(1e-3));
  CHECK(report.equality_gap <= 1e-3);
  CHECK_FALSE(report.low_confidence);
}

TEST_CASE("a polygonal source reproduces its own rotation exactly") {
  SampledCurve tri = octant_curve(4096);
  TCReport report = total_intrinsic_curvature(tri);
  for (const auto& row : report.refinement.rows)
    CHECK(row.rotation == doctest::Approx(1.5 * M_PI).epsilon(1e-12));
  CHECK(report.estimate == doctest::Approx(1.5 * M_PI).epsilon(1e-12));
  CHECK(report.equality_gap <= 1e-6);
}

TEST_CASE("a great circle has vanishing total intrinsic curvature") {
  SampledCurve eq = parallel_curve(M_PI / 2.0, 4096);
  TCReport report = total_intrinsic_curvature(eq);
  CHECK(std::abs(report.estimate) <= 1e-6);
}

TEST_CASE("euclidean tc of the planar unit circle") {
  SampledCurve circle = planar_smooth_curve("cos(t)", "sin(t)", 0.0, 2.0 * M_PI, 2048);
  CHECK(circle.closed);
  CHECK(euclidean_total_curvature(circle) == doctest::Approx(2.0 * M_PI).epsilon(1e-4));
}

TEST_CASE("euclidean tc of the cantor graph") {
  SampledCurve curve = cantor_graph_curve(6);
  CHECK(euclidean_total_curvature(curve) == doctest::Approx(M_PI / 4.0).epsilon(4e-2));
}

TEST_CASE("euclidean tc of a fine inscribed polygonal approaches rotation plus length") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  std::vector<double> part;
  for (int i = 0; i < 256; ++i) part.push_back(par.length * double(i) / 256.0);
  GeodesicPolygonal poly = inscribe(par, part);
  std::vector<ChartPoint> verts;
  for (const auto& v : poly.vertex) verts.push_back({v.x(), v.y()});
  SampledCurve poly_curve = geodesic_polygon_curve(par.chart, verts, 4096);
  double identity = rotation_of(poly) + poly.length();

  // the Gauss-sphere variation route hits the identity at quadrature accuracy
  double tc_var = essential_variation(tantrix_series(poly_curve), SeriesMetric::GreatCircle);
  CHECK(std::abs(tc_var - identity) <= 1e-4);
  CHECK(tc_var == doctest::Approx(M_PI + M_PI * std::sqrt(3.0)).epsilon(1e-3));

  // the chord-refinement route approaches the same limit from below: corner
  // chords tilt into the sphere, so its first-order tail is slow
  double tc_chord = euclidean_total_curvature(poly_curve);
  CHECK(tc_chord <= identity + 1e-9);
  CHECK(tc_chord >= 0.95 * identity);

  // the normal-curvature bound of the chart dominates the euclidean excess
  CHECK(tc_var <= rotation_of(poly) + par.chart->curvature_bound * poly.length() + 1e-6);
}

TEST_CASE("two refinement strategies reach the same limit") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  TCReport uniform = total_intrinsic_curvature(par);
  RefinementStrategy random_strategy;
  random_strategy.kind = RefinementStrategy::Kind::RandomNested;
  random_strategy.initial = 8;
  random_strategy.rounds = 7;
  random_strategy.seed = 1234;
  TCReport randomized = total_intrinsic_curvature(par, random_strategy);
  CHECK(std::abs(uniform.estimate - randomized.estimate) <= 2e-3);
}

TEST_CASE("gauss-bonnet on a spherical cap") {
  SampledCurve cap = parallel_curve(M_PI / 4.0, 4096);
  GaussBonnetReport report = gauss_bonnet_check(cap);
  CHECK(report.area_integral ==
        doctest::Approx(2.0 * M_PI * (1.0 - std::cos(M_PI / 4.0))).epsilon(1e-4));
  CHECK(report.theta_span == doctest::Approx(2.0 * M_PI * std::cos(M_PI / 4.0)).epsilon(1e-6));
  CHECK(report.alpha == doctest::Approx(0.0));
  CHECK(report.residual <= 1e-4);
}

TEST_CASE("gauss-bonnet on the octant triangle") {
  SampledCurve tri = octant_curve(4096);
  GaussBonnetReport report = gauss_bonnet_check(tri);
  CHECK(report.area_integral == doctest::Approx(M_PI / 2.0).epsilon(1e-4));
  CHECK(report.theta_span == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK(report.alpha == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
  CHECK(report.residual <= 1e-4);
}

TEST_CASE("gauss-bonnet on a flat-chart square") {
  auto flat = flat_polar_chart();
  std::vector<ChartPoint> verts;
  const double sq[4][2] = {{1.6, -0.4}, {2.4, -0.4}, {2.4, 0.4}, {1.6, 0.4}};
  for (auto& v : sq) {
    Vec2 p(v[0], v[1]);
    verts.push_back({p.norm(), std::atan2(p.y(), p.x())});
  }
  SampledCurve square = geodesic_polygon_curve(flat, verts, 2048);
  GaussBonnetReport report = gauss_bonnet_check(square);
  CHECK(std::abs(report.area_integral) <= 1e-9);
  CHECK(report.residual <= 1e-6);
}

TEST_CASE("gauss-bonnet input validation") {
  auto sphere = sphere_chart();
  GeodesicArc arc = geodesic_shoot(*sphere, {M_PI / 2, 0.0}, Vec2(0.0, 1.0), 1.0);
  SampledCurve open_arc =
      geodesic_polygon_curve(sphere, {{M_PI / 2, 0.0}, arc.end()}, 512, false);
  CHECK_THROWS_AS(gauss_bonnet_check(open_arc), ValidationError);
  // a negatively oriented (clockwise) square is rejected
  auto flat = flat_polar_chart();
  std::vector<ChartPoint> verts;
  const double sq[4][2] = {{1.6, -0.4}, {1.6, 0.4}, {2.4, 0.4}, {2.4, -0.4}};
  for (auto& v : sq) {
    Vec2 p(v[0], v[1]);
    verts.push_back({p.norm(), std::atan2(p.y(), p.x())});
  }
  SampledCurve cw = geodesic_polygon_curve(flat, verts, 1024);
  CHECK_THROWS_AS(gauss_bonnet_check(cw), ComputationError);
}

TEST_CASE("development of a flat-chart geodesic is a straight segment") {
  auto flat = flat_polar_chart();
  SampledCurve seg = geodesic_polygon_curve(flat, {{2.0, 0.0}, {2.0, 1.2}}, 512, false);
  SampledCurve dev = develop(seg);
  Vec2 a = dev.point.front(), b = dev.point.back();
  Vec2 dir = (b - a).normalized();
  for (int i = 0; i < dev.nodes(); ++i)
    CHECK(std::abs(cross2(dir, dev.point[size_t(i)] - a)) <= 1e-9);
  CHECK(euclidean_total_curvature(dev) <= 1e-9);
}

TEST_CASE("development preserves length, curvature, and total curvature") {
  EnvelopeParallel env = envelope_chart_of_parallel(M_PI / 3.0, 65536);
  SampledCurve dev = develop(env.curve);
  CHECK(std::abs(dev.length - env.curve.length) <= 1e-6);
  for (int i = 0; i < dev.nodes(); i += 97)
    CHECK(std::abs(dev.kappa_g[i] - env.curve.kappa_g[i]) <= 1e-6);
  double tc_dev = euclidean_total_curvature(dev);
  CHECK(std::abs(tc_dev - energy_functional(env.curve).ac) <= 1e-4);
}

TEST_CASE("envelope chart of the parallel at pi/4") {
  EnvelopeParallel env = envelope_chart_of_parallel(M_PI / 4.0, 2048);
  CHECK(env.chart->flat);
  CHECK(env.curve.length == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-12));
  for (int i = 0; i < env.curve.nodes(); i += 211) {
    CHECK(env.curve.point[size_t(i)].x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.curve.kappa_g[i] == doctest::Approx(1.0).epsilon(1e-9));  // cot(pi/4)
  }
  // the development never closes below the great circle: the turn is under 2 pi
  CHECK_FALSE(env.curve.closed);
  double span = env.curve.point.back().y() - env.curve.point.front().y();
  CHECK(span == doctest::Approx(2.0 * M_PI * std::cos(M_PI / 4.0)).epsilon(1e-12));
  CHECK(span < 2.0 * M_PI);
  CHECK_THROWS_WITH_AS(envelope_chart_of_parallel(M_PI / 2.0, 256),
                       doctest::Contains("geodesic"), ValidationError);
}

TEST_CASE("rotation differs across charts while the limits agree") {
  const double theta0 = M_PI / 3.0;
  SampledCurve par = parallel_curve(theta0, 4096);
  EnvelopeParallel env = envelope_chart_of_parallel(theta0, 4096);
  auto partition = [](const SampledCurve& c, int count, bool with_end) {
    std::vector<double> part;
    for (int i = 0; i < count; ++i) part.push_back(c.length * double(i) / double(count));
    if (with_end) part.push_back(c.length);
    return part;
  };
  double rot_sphere = rotation_of(inscribe(par, partition(par, 8, false)));
  double rot_flat = rotation_of(inscribe(env.curve, partition(env.curve, 8, true)));
  CHECK(std::abs(rot_sphere - rot_flat) > 1e-3);

  RefinementStrategy strat;
  strat.initial = 8;
  strat.rounds = 7;
  TCReport sphere_tc = total_intrinsic_curvature(par, strat);
  TCReport flat_tc = total_intrinsic_curvature(env.curve, strat);
  CHECK(std::abs(sphere_tc.estimate - flat_tc.estimate) <= 2e-3);
}

TEST_CASE("develop refuses non-flat charts") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 256);
  CHECK_THROWS_AS(develop(par), ValidationError);
}

}  // TEST_SUITE
