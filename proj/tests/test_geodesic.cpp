#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcurve/geodesic.hpp"

#include <cmath>
#include <random>

using namespace tcurve;

namespace {

double unit_speed_defect(const SurfaceChart& chart, const GeodesicArc& arc) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < arc.samples.cols(); ++i) {
    Vec4 y = arc.samples.col(i);
    double n2 = y[2] * y[2] + chart.g(y[0], y[1]) * y[3] * y[3];
    worst = std::max(worst, std::abs(n2 - 1.0));
  }
  return worst;
}

}  // namespace

TEST_SUITE("geodesic") {

TEST_CASE("meridian shot reaches the antipodal region at unit speed") {
  auto sphere = sphere_chart();
  GeodesicArc arc = geodesic_shoot(*sphere, {M_PI / 2, 0.7}, Vec2(1.0, 0.0), M_PI / 2);
  CHECK(arc.end().r == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK(unit_speed_defect(*sphere, arc) <= 1e-9);
  for (Eigen::Index i = 0; i < arc.samples.cols(); ++i)
    CHECK(std::abs(arc.samples(2, i)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("flat-chart geodesics are straight lines in the plane") {
  auto flat = flat_polar_chart();
  GeodesicArc arc = geodesic_shoot(*flat, {1.0, 0.0}, Vec2(std::cos(1.1), std::sin(1.1)), 2.0);
  Vec2 a = chart_plane(arc.point_at(0.0));
  Vec2 b = chart_plane(arc.point_at(arc.length));
  Vec2 dir = (b - a).normalized();
  for (Eigen::Index i = 0; i < arc.samples.cols(); ++i) {
    Vec2 x = chart_plane(ChartPoint{arc.samples(0, i), arc.samples(1, i)});
    CHECK(std::abs(cross2(dir, x - a)) <= 1e-8);
  }
}

TEST_CASE("unit-speed conservation across random shoots") {
  auto sphere = sphere_chart();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    ChartPoint start{0.4 + 2.2 * uni(rng), 2.0 * M_PI * uni(rng)};
    double g = metric_at(*sphere, start);
    double psi = 2.0 * M_PI * uni(rng);
    GeodesicArc arc = geodesic_shoot(*sphere, start, Vec2(std::cos(psi), std::sin(psi) / std::sqrt(g)),
                                     0.2 + 1.5 * uni(rng), ShootOptions{0.0, true});
    CHECK(unit_speed_defect(*sphere, arc) <= 1e-9);
  }
}

TEST_CASE("non-unit directions and chart exits are reported") {
  auto sphere = sphere_chart();
  CHECK_THROWS_AS(geodesic_shoot(*sphere, {1.0, 0.0}, Vec2(2.0, 0.0), 1.0), ValidationError);
  CHECK_THROWS_AS(geodesic_shoot(*sphere, {3.0, 0.0}, Vec2(1.0, 0.0), 1.0), TruncatedArcError);
}

TEST_CASE("analytic sphere connection lengths") {
  auto sphere = sphere_chart();
  // pole-adjacent point to the equator is a quarter turn in the limit
  double d = geodesic_distance(*sphere, {1e-3, 0.0}, {M_PI / 2, 0.0});
  CHECK(d == doctest::Approx(M_PI / 2).epsilon(2e-3));
  // two equator points a radian apart
  CHECK(geodesic_distance(*sphere, {M_PI / 2, 0.2}, {M_PI / 2, 1.2}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geodesic_distance(*sphere, {0.8, 0.3}, {0.8, 0.3}) == doctest::Approx(0.0));
}

TEST_CASE("flat connection is the euclidean chord") {
  auto flat = flat_polar_chart();
  GeodesicArc arc = geodesic_connect(*flat, {1.0, 0.0}, {1.0, M_PI / 2});
  CHECK(arc.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("near-antipodal connection is refused") {
  auto sphere = sphere_chart();
  CHECK_THROWS_AS(geodesic_connect(*sphere, {M_PI / 2, 0.0}, {M_PI / 2, M_PI - 0.01}),
                  ComputationError);
}

TEST_CASE("connect then shoot round-trips to the target") {
  auto sphere = sphere_chart();
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    ChartPoint p{0.5 + 1.8 * uni(rng), 2.0 * M_PI * uni(rng)};
    ChartPoint q{0.5 + 1.8 * uni(rng), p.phi + 1.2 * (uni(rng) - 0.5)};
    if (geodesic_distance(*sphere, p, q) < 1e-3) continue;
    GeodesicArc arc = geodesic_connect(*sphere, p, q);
    GeodesicArc reshoot = geodesic_shoot(*sphere, p, arc.direction, arc.length);
    Vec3 target = embed_point(*sphere, q);
    Vec3 landed = embed_point(*sphere, reshoot.end());
    CHECK((target - landed).norm() <= 1e-6);
  }
}

TEST_CASE("shooting backend agrees with the analytic sphere backend") {
  auto sphere = sphere_chart();
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ConnectOptions shooting;
  shooting.backend = ConnectOptions::Backend::Shooting;
  int tested = 0;
  for (int k = 0; k < 200 && tested < 50; ++k) {
    ChartPoint p{0.6 + 1.6 * uni(rng), 2.0 * M_PI * uni(rng)};
    ChartPoint q{0.6 + 1.6 * uni(rng), p.phi + 0.9 * (uni(rng) - 0.5)};
    double exact = geodesic_distance(*sphere, p, q);
    if (exact < 0.05 || exact > 1.5) continue;
    double shot = geodesic_connect(*sphere, p, q, shooting).length;
    CHECK(shot == doctest::Approx(exact).epsilon(1e-6));
    ++tested;
  }
  CHECK(tested == 50);
}

}  // TEST_SUITE
