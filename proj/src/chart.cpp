#include "tcurve/chart.hpp"

#include "tcurve/expression.hpp"

#include <cmath>
#include <sstream>

namespace tcurve {

namespace {

void check_validity(const SurfaceChart& chart, ChartPoint p) {
  if (!chart.in_validity(p.r) || !std::isfinite(p.phi)) {
    std::ostringstream os;
    os << "point r=" << p.r << " outside chart '" << chart.name << "' validity ["
       << chart.r_min << ", " << chart.r_max << "]";
    throw ValidationError(os.str());
  }
}

double checked_metric(const SurfaceChart& chart, ChartPoint p) {
  check_validity(chart, p);
  double g = chart.g(p.r, p.phi);
  if (g < chart.metric_floor) {
    std::ostringstream os;
    os << "degenerate metric on chart '" << chart.name << "': g(" << p.r << ", " << p.phi
       << ") = " << g;
    throw ComputationError(os.str());
  }
  return g;
}

}  // namespace

ChartPtr sphere_chart() {
  auto c = std::make_shared<SurfaceChart>();
  c->name = "sphere";
  c->g = [](double r, double) { double s = std::sin(r); return s * s; };
  c->g_r = [](double r, double) { return 2.0 * std::sin(r) * std::cos(r); };
  c->g_phi = [](double, double) { return 0.0; };
  c->g_rr = [](double r, double) { return 2.0 * std::cos(2.0 * r); };
  c->r_min = 0.0;
  c->r_max = M_PI;
  c->connect_bound = 0.9 * M_PI;  // stay below minimal-geodesic uniqueness
  c->curvature_bound = 1.0;       // |normal curvature| of unit-sphere geodesics
  c->embed = [](double r, double phi) {
    return Vec3(std::sin(r) * std::cos(phi), std::sin(r) * std::sin(phi), std::cos(r));
  };
  c->embed_dr = [](double r, double phi) {
    return Vec3(std::cos(r) * std::cos(phi), std::cos(r) * std::sin(phi), -std::sin(r));
  };
  c->embed_dphi = [](double r, double phi) {
    return Vec3(-std::sin(r) * std::sin(phi), std::sin(r) * std::cos(phi), 0.0);
  };
  return c;
}

ChartPtr flat_polar_chart() {
  auto c = std::make_shared<SurfaceChart>();
  c->name = "flat-polar";
  c->g = [](double r, double) { return r * r; };
  c->g_r = [](double r, double) { return 2.0 * r; };
  c->g_phi = [](double, double) { return 0.0; };
  c->g_rr = [](double, double) { return 2.0; };
  c->r_min = 0.0;
  c->r_max = 1e9;
  c->flat = true;
  c->curvature_bound = 0.0;  // flat charts embed with planar geodesics
  c->embed = [](double r, double phi) { return Vec3(r * std::cos(phi), r * std::sin(phi), 0.0); };
  c->embed_dr = [](double, double phi) { return Vec3(std::cos(phi), std::sin(phi), 0.0); };
  c->embed_dphi = [](double r, double phi) { return Vec3(-r * std::sin(phi), r * std::cos(phi), 0.0); };
  return c;
}

ChartPtr custom_polar_chart(const std::string& g_expr, double r_min, double r_max,
                            double curvature_bound) {
  if (!(r_max > r_min)) throw ValidationError("custom chart needs r_min < r_max");
  auto g = Expression::parse(g_expr, {"r", "phi"});
  auto gr = g.derivative("r");
  auto gphi = g.derivative("phi");
  auto grr = gr.derivative("r");
  auto c = std::make_shared<SurfaceChart>();
  c->name = "custom-polar(" + g_expr + ")";
  c->g = [g](double r, double phi) { return g(r, phi); };
  c->g_r = [gr](double r, double phi) { return gr(r, phi); };
  c->g_phi = [gphi](double r, double phi) { return gphi(r, phi); };
  c->g_rr = [grr](double r, double phi) { return grr(r, phi); };
  c->r_min = r_min;
  c->r_max = r_max;
  c->curvature_bound = curvature_bound;
  return c;
}

double metric_at(const SurfaceChart& chart, ChartPoint p) {
  check_validity(chart, p);
  double g = chart.g(p.r, p.phi);
  if (g < 0.0) throw ComputationError("metric coefficient is negative at r=" + std::to_string(p.r));
  return g;
}

Christoffel christoffel_at(const SurfaceChart& chart, ChartPoint p) {
  double g = checked_metric(chart, p);
  double gr = chart.g_r(p.r, p.phi);
  Christoffel out;
  out.r_phiphi = -0.5 * gr;
  out.phi_rphi = gr / (2.0 * g);
  out.phi_phiphi = chart.g_phi(p.r, p.phi) / (2.0 * g);
  return out;
}

double gauss_curvature_at(const SurfaceChart& chart, ChartPoint p) {
  double g = checked_metric(chart, p);
  double gr = chart.g_r(p.r, p.phi);
  double grr = chart.g_rr(p.r, p.phi);
  // K = -(sqrt g)_rr / sqrt g expanded in g and its radial derivatives.
  return -grr / (2.0 * g) + gr * gr / (4.0 * g * g);
}

Vec2 ortho_components(const SurfaceChart& chart, ChartPoint p, const Vec2& v) {
  double g = checked_metric(chart, p);
  return Vec2(v.x(), std::sqrt(g) * v.y());
}

double metric_dot(const SurfaceChart& chart, ChartPoint p, const Vec2& a, const Vec2& b) {
  double g = checked_metric(chart, p);
  return a.x() * b.x() + g * a.y() * b.y();
}

double chart_angle(const SurfaceChart& chart, ChartPoint p, const Vec2& from, const Vec2& to) {
  return oriented_angle(ortho_components(chart, p, from), ortho_components(chart, p, to));
}

Vec3 embed_point(const SurfaceChart& chart, ChartPoint p) {
  if (!chart.has_embedding()) throw ComputationError("chart '" + chart.name + "' has no embedding");
  return chart.embed(p.r, p.phi);
}

Vec3 embed_tangent(const SurfaceChart& chart, ChartPoint p, const Vec2& v) {
  if (!chart.has_embedding()) throw ComputationError("chart '" + chart.name + "' has no embedding");
  return v.x() * chart.embed_dr(p.r, p.phi) + v.y() * chart.embed_dphi(p.r, p.phi);
}

}  // namespace tcurve
