#pragma once

#include "tcurve/types.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace tcurve {

/// Nontrivial Christoffel symbols of a geodesic polar metric ds^2 = dr^2 + g dphi^2.
struct Christoffel {
  double r_phiphi = 0.0;    // Gamma^r_{phi phi}  = -g_r / 2
  double phi_rphi = 0.0;    // Gamma^phi_{r phi}  =  g_r / (2g)
  double phi_phiphi = 0.0;  // Gamma^phi_{phi phi} = g_phi / (2g)
};

/// Intrinsic surface model in geodesic polar coordinates: the metric coefficient
/// g(r, phi) with exact first/second derivatives as callable fields, plus an
/// optional isometric embedding into R^3 (present for the sphere and flat charts).
struct SurfaceChart {
  using Field = std::function<double(double, double)>;
  using Embedding = std::function<Vec3(double, double)>;

  std::string name;
  Field g, g_r, g_phi, g_rr;

  double r_min = 0.0;                      // validity interval for evaluation (open, with
  double r_max = 0.0;                      // a small boundary tolerance)
  double pole_guard = 1e-3;                // curves and vertices must keep r >= pole_guard
  double metric_floor = 1e-12;             // below this g the chart refuses 1/g formulas
  double connect_bound = std::numeric_limits<double>::infinity();  // two-point injectivity guard
  double curvature_bound = 1.0;            // bound c with TC(P) <= rotation(P) + c * L(P)
  bool flat = false;                       // g == r^2, i.e. Gauss curvature 0

  Embedding embed, embed_dr, embed_dphi;   // null when no embedding is known

  bool has_embedding() const { return static_cast<bool>(embed); }
  bool in_validity(double r) const { return r >= r_min - 1e-9 && r <= r_max + 1e-9; }
};

using ChartPtr = std::shared_ptr<const SurfaceChart>;

ChartPtr sphere_chart();
ChartPtr flat_polar_chart();
/// Chart with an expression-defined metric coefficient in variables r, phi.
ChartPtr custom_polar_chart(const std::string& g_expr, double r_min, double r_max,
                            double curvature_bound = 1.0);

double metric_at(const SurfaceChart& chart, ChartPoint p);
Christoffel christoffel_at(const SurfaceChart& chart, ChartPoint p);
/// Gauss curvature K = -(sqrt g)_rr / sqrt g evaluated from the metric fields.
double gauss_curvature_at(const SurfaceChart& chart, ChartPoint p);

/// Components of a chart tangent (dr, dphi) in the oriented orthonormal frame
/// (unit radial, unit angular): (dr, sqrt(g) dphi).
Vec2 ortho_components(const SurfaceChart& chart, ChartPoint p, const Vec2& v);
/// Metric inner product of two chart tangents at p.
double metric_dot(const SurfaceChart& chart, ChartPoint p, const Vec2& a, const Vec2& b);
/// Oriented angle between chart tangents (counterclockwise-in-chart positive).
double chart_angle(const SurfaceChart& chart, ChartPoint p, const Vec2& from, const Vec2& to);

/// Map a chart point into the coordinate plane (r cos phi, r sin phi). Used as a
/// topology-faithful proxy for containment and root finding, not as an isometry.
inline Vec2 chart_plane(ChartPoint p) { return Vec2(p.r * std::cos(p.phi), p.r * std::sin(p.phi)); }
inline Vec2 chart_plane(const Vec2& p) { return chart_plane(ChartPoint{p.x(), p.y()}); }

Vec3 embed_point(const SurfaceChart& chart, ChartPoint p);
/// Push a chart tangent through the embedding.
Vec3 embed_tangent(const SurfaceChart& chart, ChartPoint p, const Vec2& v);

}  // namespace tcurve
