#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcurve/chart.hpp"

#include <cmath>
#include <random>

using namespace tcurve;

TEST_SUITE("chart") {

TEST_CASE("metric values on the built-in charts") {
  auto sphere = sphere_chart();
  CHECK(metric_at(*sphere, {M_PI / 2, 0.3}) == doctest::Approx(1.0));
  CHECK(metric_at(*sphere, {1e-6, 0.0}) == doctest::Approx(0.0).epsilon(1e-9));
  auto flat = flat_polar_chart();
  CHECK(metric_at(*flat, {2.0, 1.0}) == doctest::Approx(4.0));
}

TEST_CASE("out-of-chart evaluation is a domain error") {
  auto sphere = sphere_chart();
  CHECK_THROWS_AS(metric_at(*sphere, {3.5, 0.0}), ValidationError);
  CHECK_THROWS_AS(metric_at(*sphere, {-0.2, 0.0}), ValidationError);
}

TEST_CASE("christoffel coefficients") {
  auto sphere = sphere_chart();
  Christoffel c = christoffel_at(*sphere, {M_PI / 4, 0.0});
  CHECK(c.r_phiphi == doctest::Approx(-0.5).epsilon(1e-12));
  Christoffel ceq = christoffel_at(*sphere, {M_PI / 2, 1.0});
  CHECK(ceq.phi_rphi == doctest::Approx(0.0).epsilon(1e-12));

  auto flat = flat_polar_chart();
  Christoffel cf = christoffel_at(*flat, {3.0, 0.2});
  CHECK(cf.r_phiphi == doctest::Approx(-3.0));
  CHECK(cf.phi_rphi == doctest::Approx(1.0 / 3.0));
  CHECK(cf.phi_phiphi == doctest::Approx(0.0));
}

TEST_CASE("degenerate metric is refused for 1/g formulas") {
  auto sphere = sphere_chart();
  CHECK_THROWS_AS(christoffel_at(*sphere, {1e-9, 0.0}), ComputationError);
}

TEST_CASE("gauss curvature: sphere 1, flat 0, pseudosphere-like -1") {
  auto sphere = sphere_chart();
  auto flat = flat_polar_chart();
  auto hyper = custom_polar_chart("sinh(r)^2", 1e-3, 5.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(0.2, 2.8);
  for (int k = 0; k < 25; ++k) {
    double r = uni(rng), phi = 2.0 * uni(rng);
    CHECK(gauss_curvature_at(*sphere, {r, phi}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gauss_curvature_at(*flat, {r, phi}) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(gauss_curvature_at(*hyper, {r, phi}) == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("expression chart reproduces the built-in sphere") {
  auto builtin = sphere_chart();
  auto custom = custom_polar_chart("sin(r)^2", 1e-3, M_PI - 1e-3);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(0.1, 3.0);
  for (int k = 0; k < 100; ++k) {
    double r = uni(rng), phi = 2.0 * uni(rng);
    CHECK(custom->g(r, phi) == doctest::Approx(builtin->g(r, phi)).epsilon(1e-12));
    CHECK(custom->g_r(r, phi) == doctest::Approx(builtin->g_r(r, phi)).epsilon(1e-12));
    CHECK(custom->g_rr(r, phi) == doctest::Approx(builtin->g_rr(r, phi)).epsilon(1e-12));
  }
}

TEST_CASE("derivative fields agree with finite differences at random points") {
  auto sphere = sphere_chart();
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uni(0.3, 2.7);
  double h = 1e-5;
  for (int k = 0; k < 100; ++k) {
    double r = uni(rng), phi = 2.0 * uni(rng);
    double fd = (sphere->g(r + h, phi) - sphere->g(r - h, phi)) / (2 * h);
    CHECK(sphere->g_r(r, phi) ==
          doctest::Approx(fd).epsilon(1e-6 * std::max(1.0, std::abs(fd))));
  }
}

TEST_CASE("orthonormal frame helpers") {
  auto sphere = sphere_chart();
  ChartPoint p{M_PI / 3, 0.4};
  double g = metric_at(*sphere, p);
  Vec2 tangent(0.0, 1.0 / std::sqrt(g));  // unit angular direction
  Vec2 o = ortho_components(*sphere, p, tangent);
  CHECK(o.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(metric_dot(*sphere, p, tangent, tangent) == doctest::Approx(1.0).epsilon(1e-12));
  Vec2 radial(1.0, 0.0);
  CHECK(chart_angle(*sphere, p, radial, tangent) == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

}  // TEST_SUITE
