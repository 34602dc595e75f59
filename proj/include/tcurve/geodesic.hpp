#pragma once

#include "tcurve/chart.hpp"
#include "tcurve/types.hpp"

#include <functional>
#include <vector>

namespace tcurve {

/// Unit-speed geodesic arc on a chart. Carries closed-form or interpolating
/// accessors for position / velocity and a dense unit-speed trace.
struct GeodesicArc {
  ChartPoint start;
  Vec2 direction;   // initial (dr, dphi), metric norm 1
  double length = 0.0;

  // state(s) = (r, phi, dr, dphi); exact for analytic backends, quartic-accurate
  // Hermite interpolation of the dense trace for shot arcs.
  std::function<Vec4(double)> state;
  Eigen::Matrix4Xd samples;  // trace at uniform s, one column per sample

  ChartPoint end() const;
  Vec2 end_direction() const;
  ChartPoint point_at(double s) const;
  Vec2 velocity_at(double s) const;
  /// Second s-derivatives (r'', phi'') from the geodesic equations at state(s).
  Vec2 accel_at(const SurfaceChart& chart, double s) const;
};

struct ShootOptions {
  double step = 0.0;        // 0 -> length / 1024
  bool truncate_ok = false; // return a partial arc instead of throwing on chart exit
};

/// Integrate the geodesic equations r'' = g_r phi'^2 / 2,
/// phi'' = -(2 g_r r' phi' + g_phi phi'^2) / (2g) with classical fixed-step RK4.
GeodesicArc geodesic_shoot(const SurfaceChart& chart, ChartPoint start, Vec2 direction,
                           double length, const ShootOptions& opts = {});

struct ConnectOptions {
  enum class Backend { Auto, Analytic, Shooting };
  Backend backend = Backend::Auto;
  double position_tol = 1e-9;
  int max_iter = 80;
};

/// Minimal geodesic between two chart points. Analytic on the sphere (great
/// circle through the embedding) and on flat charts (straight coordinate-plane
/// line); otherwise a one-parameter shoot on the initial direction angle with a
/// bracketing root-finder on the lateral miss, refined by secant steps.
GeodesicArc geodesic_connect(const SurfaceChart& chart, ChartPoint p, ChartPoint q,
                             const ConnectOptions& opts = {});

double geodesic_distance(const SurfaceChart& chart, ChartPoint p, ChartPoint q,
                         const ConnectOptions& opts = {});

}  // namespace tcurve
