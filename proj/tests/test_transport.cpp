#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcurve/transport.hpp"

#include <cmath>

using namespace tcurve;

namespace {

std::vector<double> uniform_partition(const SampledCurve& curve, int count) {
  std::vector<double> part;
  for (int i = 0; i < count; ++i) part.push_back(curve.length * double(i) / double(count));
  return part;
}

// L1 distance between the polygonal angle staircase and the smooth angle,
// evaluated on the curve grid through the vertex parameters.
double staircase_l1_gap(const SampledCurve& curve, const AngleSeries& smooth, int vertices) {
  GeodesicPolygonal poly = inscribe(curve, uniform_partition(curve, vertices));
  AngleSeries stair = transport_polygonal(poly, curve.tau_ortho(0));
  double acc = 0.0;
  double h = curve.length / double(curve.nodes() - 1);
  for (int i = 0; i < curve.nodes(); ++i) {
    double s = curve.s[i];
    size_t arc = 0;
    while (arc + 1 < poly.params.size() && poly.params[arc + 1] <= s) ++arc;
    double stair_value = stair.theta[0];
    for (size_t j = 0; j < arc; ++j) stair_value += stair.jumps[j].amount();
    acc += std::abs(stair_value - smooth.theta[i]) * h;
  }
  return acc;
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("parallel transport angle grows at cot(theta0)") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  auto [state, series] = transport_smooth(par, par.tau_ortho(0));
  double worst = 0.0;
  for (int i = 0; i < par.nodes(); ++i)
    worst = std::max(worst, std::abs(series.theta[i] - par.s[i] / std::sqrt(3.0)));
  CHECK(worst <= 1e-6);
  CHECK(transport_norm_drift(state) <= 1e-9);
  CHECK(series.jumps.empty());
}

TEST_CASE("a great circle transports its own tangent") {
  SampledCurve eq = parallel_curve(M_PI / 2.0, 2048);
  auto [state, series] = transport_smooth(eq, eq.tau_ortho(0));
  (void)state;
  CHECK(series.theta.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("sphere-frame and christoffel backends agree") {
  SampledCurve par = parallel_curve(M_PI / 4.0, 2048);
  auto [s1, a1] = transport_along(par, par.tau_ortho(0), TransportBackend::SphereFrame);
  auto [s2, a2] = transport_along(par, par.tau_ortho(0), TransportBackend::ChartChristoffel);
  CHECK((a1.theta - a2.theta).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((s1.alpha - s2.alpha).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((s1.beta - s2.beta).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("transport identity holds; frozen fields violate it by cos(theta) phi'") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  auto [state, series] = transport_smooth(par, par.tau_ortho(0));
  (void)series;
  CHECK(transport_identity_residual(state, par) <= 1e-7);

  TransportState frozen;
  frozen.alpha = Eigen::VectorXd::Constant(par.nodes(), 1.0);
  frozen.beta = Eigen::VectorXd::Zero(par.nodes());
  double expect = std::cos(M_PI / 3.0) / std::sin(M_PI / 3.0);
  CHECK(transport_identity_residual(frozen, par) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("polygonal transport: constant on one arc, variation equals rotation") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  GeodesicPolygonal single = inscribe(par, {0.0, par.length / 3.0});
  AngleSeries one = transport_polygonal(single, par.tau_ortho(0));
  CHECK(one.ac_total() == 0.0);

  GeodesicPolygonal poly = inscribe(par, uniform_partition(par, 16));
  AngleSeries stair = transport_polygonal(poly, par.tau_ortho(0));
  CHECK(stair.var_total() == rotation_of(poly));  // identical sums, bitwise
}

TEST_CASE("transport_smooth refuses curves with corners") {
  std::vector<ChartPoint> verts = {
      {3.0 * M_PI / 4.0, 0.0}, {M_PI / 2.0, M_PI / 2.0}, {M_PI / 4.0, 0.0}};
  SampledCurve tri = geodesic_polygon_curve(sphere_chart(), verts, 512);
  CHECK_THROWS_AS(transport_smooth(tri, tri.tau_ortho(0)), ValidationError);
}

TEST_CASE("octant holonomy through signed jumps") {
  std::vector<ChartPoint> verts = {
      {3.0 * M_PI / 4.0, 0.0}, {M_PI / 2.0, M_PI / 2.0}, {M_PI / 4.0, 0.0}};
  SampledCurve tri = geodesic_polygon_curve(sphere_chart(), verts, 2048);
  std::vector<double> corner_params = {0.0};
  for (const auto& j : tri.jumps)
    if (!j.at_junction) corner_params.push_back(j.s);
  GeodesicPolygonal poly = inscribe(tri, corner_params);
  AngleSeries stair = transport_polygonal(poly, tri.tau_ortho(0));
  double total_turn = stair.span_without_junction() + stair.junction_amount();
  CHECK(total_turn == doctest::Approx(1.5 * M_PI).epsilon(1e-9));
  // holonomy = 2 pi - total turning = enclosed area of the octant
  CHECK(2.0 * M_PI - total_turn == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
}

TEST_CASE("optimal lifting reduces jumps into (-pi, pi]") {
  AngleSeries series;
  series.s = Eigen::VectorXd::LinSpaced(5, 0.0, 4.0);
  series.theta = Eigen::VectorXd::Zero(5);
  auto push = [&](double at, double amount) {
    AngleJumpRec j;
    j.s = at;
    j.theta_minus = 0.0;
    j.jump = amount;
    j.theta_plus = amount;
    series.jumps.push_back(j);
  };
  push(0.5, 1.5 * M_PI);   // -> -pi/2
  push(1.5, M_PI / 3.0);   // unchanged
  push(2.5, 2.0 * M_PI);   // removed
  push(3.5, M_PI);         // tie goes to +pi
  AngleSeries lifted = optimal_lift(series);
  REQUIRE(lifted.jumps.size() == 3);
  CHECK(lifted.jumps[0].amount() == doctest::Approx(-M_PI / 2.0).epsilon(1e-12));
  CHECK(lifted.jumps[1].amount() == doctest::Approx(M_PI / 3.0).epsilon(1e-12));
  CHECK(lifted.jumps[2].amount() == doctest::Approx(M_PI).epsilon(1e-12));
  // grid values are untouched, so cos/sin are stable bitwise
  for (int i = 0; i < 5; ++i) CHECK(lifted.theta[i] == series.theta[i]);
}

TEST_CASE("geodesic curvature backends on the parallel family") {
  SampledCurve par = parallel_curve(M_PI / 4.0, 4096);
  Eigen::VectorXd chart_k = geodesic_curvature(par, CurvatureBackend::ChartFormula);
  Eigen::VectorXd sphere_k = geodesic_curvature(par, CurvatureBackend::SphereFormula);
  Eigen::VectorXd theta_k = geodesic_curvature(par, CurvatureBackend::ThetaDot);
  for (int i = 0; i < par.nodes(); i += 111) {
    CHECK(chart_k[i] == doctest::Approx(1.0).epsilon(1e-6));  // cot(pi/4)
    CHECK(sphere_k[i] == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK((chart_k - sphere_k).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((chart_k - theta_k).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("geodesics have vanishing curvature under every backend") {
  auto sphere = sphere_chart();
  GeodesicArc arc = geodesic_shoot(*sphere, {M_PI / 2, 0.0}, Vec2(0.0, 1.0), 1.5);
  SampledCurve geo = geodesic_polygon_curve(sphere, {{M_PI / 2, 0.0}, arc.end()}, 1024, false);
  CHECK(geodesic_curvature(geo, CurvatureBackend::ChartFormula).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(geodesic_curvature(geo, CurvatureBackend::ThetaDot).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("backend availability errors") {
  SampledCurve planar = planar_smooth_curve("cos(t)", "sin(t)", 0.0, 6.28, 256);
  CHECK_THROWS_AS(geodesic_curvature(planar, CurvatureBackend::ChartFormula), ComputationError);
  CHECK_THROWS_AS(transport_along(planar, Vec2(2.0, 0.0)), ValidationError);  // non-unit X0
}

TEST_CASE("polygonal angle staircase converges to the smooth angle in L1") {
  SampledCurve par = parallel_curve(M_PI / 3.0, 4096);
  auto [state, smooth] = transport_smooth(par, par.tau_ortho(0));
  (void)state;
  double prev = staircase_l1_gap(par, smooth, 8);
  for (int n : {16, 32, 64, 128}) {
    double gap = staircase_l1_gap(par, smooth, n);
    double ratio = gap / prev;
    CHECK(ratio > 0.3);
    CHECK(ratio < 0.7);  // halves within 20 percent
    prev = gap;
  }
}

}  // TEST_SUITE
