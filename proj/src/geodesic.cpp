#include "tcurve/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tcurve {

namespace {

Vec4 geodesic_rhs(const SurfaceChart& chart, const Vec4& y) {
  double r = y[0], phi = y[1], dr = y[2], dphi = y[3];
  double g = chart.g(r, phi);
  double gr = chart.g_r(r, phi);
  double ddr = 0.5 * gr * dphi * dphi;
  double num = 2.0 * gr * dr * dphi + chart.g_phi(r, phi) * dphi * dphi;
  double ddphi = 0.0;
  if (num != 0.0) {
    if (g < chart.metric_floor)
      throw ComputationError("geodesic equations hit a degenerate metric at r=" + std::to_string(r));
    ddphi = -num / (2.0 * g);
  }
  return Vec4(dr, dphi, ddr, ddphi);
}

Vec2 geodesic_accel(const SurfaceChart& chart, const Vec4& y) {
  Vec4 f = geodesic_rhs(chart, y);
  return Vec2(f[2], f[3]);
}

// Cubic Hermite on (r, phi) using the stored derivatives; the trace is dense
// enough that this is far below every stated tolerance.
std::function<Vec4(double)> hermite_state(Eigen::Matrix4Xd samples, double length) {
  return [samples = std::move(samples), length](double s) -> Vec4 {
    const Eigen::Index n = samples.cols();
    if (n == 1) return samples.col(0);
    double h = length / double(n - 1);
    double x = std::clamp(s, 0.0, length) / h;
    Eigen::Index i = std::min<Eigen::Index>(n - 2, static_cast<Eigen::Index>(x));
    double t = x - double(i);
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    Vec4 a = samples.col(i), b = samples.col(i + 1);
    Vec4 out;
    for (int k = 0; k < 2; ++k)
      out[k] = h00 * a[k] + h10 * h * a[k + 2] + h01 * b[k] + h11 * h * b[k + 2];
    // velocities: linear blend of the stored unit-speed derivatives
    out[2] = (1 - t) * a[2] + t * b[2];
    out[3] = (1 - t) * a[3] + t * b[3];
    return out;
  };
}

GeodesicArc degenerate_arc(ChartPoint p, Vec2 dir) {
  GeodesicArc arc;
  arc.start = p;
  arc.direction = dir;
  arc.length = 0.0;
  arc.samples.resize(4, 1);
  arc.samples.col(0) = Vec4(p.r, p.phi, dir.x(), dir.y());
  Vec4 fixed = arc.samples.col(0);
  arc.state = [fixed](double) { return fixed; };
  return arc;
}

// ---- analytic sphere arcs -------------------------------------------------

Vec3 sphere_embed(ChartPoint p) {
  return Vec3(std::sin(p.r) * std::cos(p.phi), std::sin(p.r) * std::sin(p.phi), std::cos(p.r));
}

// Chart state (r, phi, dr, dphi) of a point on the unit sphere with velocity v,
// with phi unwrapped near phi_hint.
Vec4 sphere_chart_state(const Vec3& x, const Vec3& v, double phi_hint) {
  double rho = std::hypot(x.x(), x.y());
  double r = std::atan2(rho, x.z());
  double phi_raw = (rho > 1e-300) ? std::atan2(x.y(), x.x()) : phi_hint;
  double phi = phi_hint + wrap_angle(phi_raw - phi_hint);
  double sr = std::sin(r), cr = std::cos(r);
  Vec3 e_r(cr * std::cos(phi), cr * std::sin(phi), -sr);
  double dr = v.dot(e_r);
  double dphi = (sr > 1e-14) ? (-v.x() * std::sin(phi) + v.y() * std::cos(phi)) / sr : 0.0;
  return Vec4(r, phi, dr, dphi);
}

GeodesicArc sphere_connect_analytic(const SurfaceChart& chart, ChartPoint p, ChartPoint q) {
  Vec3 A = sphere_embed(p), B = sphere_embed(q);
  double d = sphere_angle(A, B);
  if (d >= chart.connect_bound)
    throw ComputationError("ill-conditioned two-point connection: distance " + std::to_string(d) +
                           " is beyond the sphere injectivity guard");
  Vec2 dir0(1.0, 0.0);
  if (d < 1e-14) return degenerate_arc(p, dir0);

  double sd = std::sin(d);
  auto position = [=](double s) { return Vec3((std::sin(d - s) * A + std::sin(s) * B) / sd); };
  auto velocity = [=](double s) { return Vec3((-std::cos(d - s) * A + std::cos(s) * B) / sd); };

  int n = std::clamp(static_cast<int>(std::ceil(d / 1.2e-3)), 64, 4096);
  GeodesicArc arc;
  arc.start = p;
  arc.length = d;
  arc.samples.resize(4, n + 1);
  double phi_hint = p.phi;
  for (int i = 0; i <= n; ++i) {
    double s = d * double(i) / double(n);
    Vec4 st = sphere_chart_state(position(s), velocity(s), phi_hint);
    phi_hint = st[1];
    arc.samples.col(i) = st;
  }
  // keep the trace consistent with the requested endpoints up to phi period
  arc.samples.col(0).head<2>() = Vec2(p.r, p.phi);
  double period_shift = arc.samples(1, n) - q.phi;
  if (std::abs(std::remainder(period_shift, 2.0 * M_PI)) < 1e-6)
    arc.samples(1, n) = q.phi + 2.0 * M_PI * std::round(period_shift / (2.0 * M_PI));
  arc.direction = Vec2(arc.samples(2, 0), arc.samples(3, 0));

  // evaluate exactly, unwrapping phi against the nearest stored trace sample
  Eigen::Matrix4Xd samples = arc.samples;
  arc.state = [=](double s) {
    s = std::clamp(s, 0.0, d);
    int i = std::clamp(static_cast<int>(std::round(s / d * n)), 0, n);
    return sphere_chart_state(position(s), velocity(s), samples(1, i));
  };
  return arc;
}

// ---- analytic flat-chart arcs (straight lines in the coordinate plane) -----

Vec4 flat_chart_state(const Vec2& x, const Vec2& u, double phi_hint) {
  double r = x.norm();
  double phi_raw = std::atan2(x.y(), x.x());
  double phi = phi_hint + wrap_angle(phi_raw - phi_hint);
  double dr = x.dot(u) / r;
  double dphi = cross2(x, u) / (r * r);
  return Vec4(r, phi, dr, dphi);
}

GeodesicArc flat_connect_analytic(const SurfaceChart& chart, ChartPoint p, ChartPoint q) {
  Vec2 P = chart_plane(p), Q = chart_plane(q);
  double d = (Q - P).norm();
  if (d < 1e-14) return degenerate_arc(p, Vec2(1.0, 0.0));
  Vec2 u = (Q - P) / d;
  double min_r = std::abs(cross2(P, u));  // distance of the supporting line to the pole
  double t_foot = -P.dot(u);
  if (t_foot > 0.0 && t_foot < d && min_r < chart.pole_guard)
    throw ComputationError("flat-chart segment passes through the coordinate pole");

  int n = std::clamp(static_cast<int>(std::ceil(d / 1.2e-3)), 64, 4096);
  GeodesicArc arc;
  arc.start = p;
  arc.length = d;
  arc.samples.resize(4, n + 1);
  double phi_hint = p.phi;
  for (int i = 0; i <= n; ++i) {
    double s = d * double(i) / double(n);
    Vec4 st = flat_chart_state(P + s * u, u, phi_hint);
    phi_hint = st[1];
    arc.samples.col(i) = st;
  }
  arc.samples.col(0).head<2>() = Vec2(p.r, p.phi);
  arc.direction = Vec2(arc.samples(2, 0), arc.samples(3, 0));
  Eigen::Matrix4Xd samples = arc.samples;
  arc.state = [=](double s) {
    s = std::clamp(s, 0.0, d);
    int i = std::clamp(static_cast<int>(std::round(s / d * n)), 0, n);
    return flat_chart_state(P + s * u, u, samples(1, i));
  };
  return arc;
}

}  // namespace

ChartPoint GeodesicArc::end() const {
  Vec4 st = samples.col(samples.cols() - 1);
  return ChartPoint{st[0], st[1]};
}

Vec2 GeodesicArc::end_direction() const {
  Vec4 st = samples.col(samples.cols() - 1);
  return Vec2(st[2], st[3]);
}

ChartPoint GeodesicArc::point_at(double s) const {
  Vec4 st = state(s);
  return ChartPoint{st[0], st[1]};
}

Vec2 GeodesicArc::velocity_at(double s) const {
  Vec4 st = state(s);
  return Vec2(st[2], st[3]);
}

Vec2 GeodesicArc::accel_at(const SurfaceChart& chart, double s) const {
  return geodesic_accel(chart, state(s));
}

GeodesicArc geodesic_shoot(const SurfaceChart& chart, ChartPoint start, Vec2 direction,
                           double length, const ShootOptions& opts) {
  double g0 = metric_at(chart, start);
  double norm0 = direction.x() * direction.x() + g0 * direction.y() * direction.y();
  if (std::abs(norm0 - 1.0) > 1e-6)
    throw ValidationError("geodesic_shoot needs a unit initial direction (metric norm was " +
                          std::to_string(std::sqrt(norm0)) + ")");
  if (length < 0.0) throw ValidationError("geodesic_shoot needs a nonnegative length");
  if (length == 0.0) return degenerate_arc(start, direction);

  double step = opts.step > 0.0 ? opts.step : length / 1024.0;
  int n = std::max(1, static_cast<int>(std::ceil(length / step)));
  double h = length / double(n);

  GeodesicArc arc;
  arc.start = start;
  arc.direction = direction;
  arc.samples.resize(4, n + 1);
  Vec4 y(start.r, start.phi, direction.x(), direction.y());
  arc.samples.col(0) = y;
  int reached = n;
  for (int i = 0; i < n; ++i) {
    Vec4 k1 = geodesic_rhs(chart, y);
    Vec4 k2 = geodesic_rhs(chart, y + 0.5 * h * k1);
    Vec4 k3 = geodesic_rhs(chart, y + 0.5 * h * k2);
    Vec4 k4 = geodesic_rhs(chart, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (chart.in_validity(y[0])) {
      // project back onto the unit-speed constraint the flow preserves
      double gy = chart.g(y[0], y[1]);
      double norm = std::sqrt(y[2] * y[2] + gy * y[3] * y[3]);
      if (norm > 0.0) {
        y[2] /= norm;
        y[3] /= norm;
      }
    }
    if (!chart.in_validity(y[0])) {
      if (!opts.truncate_ok) {
        std::ostringstream os;
        os << "geodesic exits the chart validity interval near s=" << (double(i) + 0.5) * h;
        throw TruncatedArcError(os.str(), double(i) * h);
      }
      reached = i;  // keep the last valid sample as the arc end
      break;
    }
    arc.samples.col(i + 1) = y;
  }
  if (reached < n) {
    arc.samples.conservativeResize(4, reached + 1);
    arc.length = double(reached) * h;
  } else {
    arc.length = length;
  }
  arc.state = hermite_state(arc.samples, arc.length);
  return arc;
}

GeodesicArc geodesic_connect(const SurfaceChart& chart, ChartPoint p, ChartPoint q,
                             const ConnectOptions& opts) {
  if (!chart.in_validity(p.r) || !chart.in_validity(q.r))
    throw ValidationError("geodesic_connect endpoints must lie in the chart validity interval");

  const bool want_analytic = opts.backend != ConnectOptions::Backend::Shooting;
  if (want_analytic && chart.name == "sphere" && chart.has_embedding())
    return sphere_connect_analytic(chart, p, q);
  if (want_analytic && chart.flat) return flat_connect_analytic(chart, p, q);
  if (opts.backend == ConnectOptions::Backend::Analytic)
    throw ComputationError("no analytic connection backend for chart '" + chart.name + "'");

  // Shooting backend. Work in the coordinate plane for miss measurement only.
  Vec2 target = chart_plane(q);
  double g0 = metric_at(chart, p);
  Vec2 delta(q.r - p.r, q.phi - p.phi);
  Vec2 delta_ortho(delta.x(), std::sqrt(g0) * delta.y());
  double rough = delta_ortho.norm();
  if (rough < 1e-14) return degenerate_arc(p, Vec2(1.0, 0.0));
  if (std::isfinite(chart.connect_bound) && rough >= chart.connect_bound)
    throw ComputationError("two-point connection beyond the chart injectivity guard");

  double cap = 1.8 * rough + 8.0 * rough / 1024.0;
  ShootOptions shoot_opts;
  shoot_opts.step = std::max(cap / 2048.0, 1e-9);
  shoot_opts.truncate_ok = true;

  struct Probe {
    double miss = 0.0;     // signed lateral offset at closest approach
    double dist = 0.0;     // plane distance at closest approach
    double s_close = 0.0;  // arc length at closest approach
    GeodesicArc arc;
  };
  auto probe = [&](double psi) {
    Vec2 dir(std::cos(psi), std::sin(psi) / std::sqrt(g0));
    Probe out;
    out.arc = geodesic_shoot(chart, p, dir, cap, shoot_opts);
    const auto& S = out.arc.samples;
    Eigen::Index best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < S.cols(); ++i) {
      Vec2 x = chart_plane(ChartPoint{S(0, i), S(1, i)});
      double d2 = (x - target).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    double hs = out.arc.length / double(std::max<Eigen::Index>(1, S.cols() - 1));
    double s_best = double(best) * hs;
    // parabolic refinement of the closest-approach parameter
    if (best > 0 && best + 1 < S.cols()) {
      auto d2_at = [&](Eigen::Index i) {
        Vec2 x = chart_plane(ChartPoint{S(0, i), S(1, i)});
        return (x - target).squaredNorm();
      };
      double dm = d2_at(best - 1), d0 = best_d2, dp = d2_at(best + 1);
      double denom = dm - 2.0 * d0 + dp;
      if (std::abs(denom) > 1e-300) s_best += hs * 0.5 * (dm - dp) / denom;
    }
    s_best = std::clamp(s_best, 0.0, out.arc.length);
    Vec4 st = out.arc.state(s_best);
    ChartPoint cp{st[0], st[1]};
    Vec2 x = chart_plane(cp);
    // plane tangent of the trace at closest approach
    double r = st[0], phi = st[1];
    Vec2 tangent(st[2] * std::cos(phi) - r * std::sin(phi) * st[3],
                 st[2] * std::sin(phi) + r * std::cos(phi) * st[3]);
    double tn = tangent.norm();
    if (tn > 0) tangent /= tn;
    out.dist = (x - target).norm();
    out.miss = cross2(tangent, target - x);
    out.s_close = s_best;
    return out;
  };

  double psi0 = std::atan2(delta_ortho.y(), delta_ortho.x());
  Probe best = probe(psi0);
  double psi_lo = psi0, psi_hi = psi0;
  Probe lo = best, hi = best;
  bool bracketed = false;
  for (int k = 1; k <= 24 && !bracketed; ++k) {
    double span = 0.06 * double(k);
    psi_lo = psi0 - span;
    psi_hi = psi0 + span;
    lo = probe(psi_lo);
    hi = probe(psi_hi);
    if (lo.miss == 0.0) { best = lo; bracketed = true; break; }
    if (hi.miss == 0.0) { best = hi; bracketed = true; break; }
    if (lo.miss * hi.miss < 0.0) bracketed = true;
  }
  if (!bracketed)
    throw ComputationError("shooting connection failed to bracket the target direction");

  double a = psi_lo, b = psi_hi, fa = lo.miss, fb = hi.miss;
  Probe current = best;
  for (int it = 0; it < opts.max_iter; ++it) {
    double mid;
    if (std::abs(fb - fa) > 1e-300) {
      mid = b - fb * (b - a) / (fb - fa);  // secant
      if (!(mid > std::min(a, b) && mid < std::max(a, b))) mid = 0.5 * (a + b);
    } else {
      mid = 0.5 * (a + b);
    }
    current = probe(mid);
    if (current.dist < opts.position_tol * (1.0 + target.norm())) break;
    if (current.miss * fa <= 0.0) {
      b = mid;
      fb = current.miss;
    } else {
      a = mid;
      fa = current.miss;
    }
    if (std::abs(b - a) < 1e-15) break;
  }
  if (current.dist > 1e-7 * (1.0 + target.norm()))
    throw ComputationError("shooting connection did not converge within the iteration budget");

  // Final arc at the solved direction, cut at the solved length, with one
  // along-track Newton correction of the endpoint.
  double s_final = current.s_close;
  Vec2 dir(current.arc.samples(2, 0), current.arc.samples(3, 0));
  GeodesicArc arc = geodesic_shoot(chart, p, dir, s_final, ShootOptions{s_final / 1024.0, false});
  Vec4 st_end = arc.samples.col(arc.samples.cols() - 1);
  ChartPoint pe{st_end[0], st_end[1]};
  Vec2 xe = chart_plane(pe);
  double r = st_end[0], phi = st_end[1];
  Vec2 te(st_end[2] * std::cos(phi) - r * std::sin(phi) * st_end[3],
          st_end[2] * std::sin(phi) + r * std::cos(phi) * st_end[3]);
  double tn = te.norm();
  if (tn > 0) {
    double ds = (target - xe).dot(te / tn) / tn;
    if (std::abs(ds) > 1e-15 && s_final + ds > 0) {
      s_final += ds;
      arc = geodesic_shoot(chart, p, dir, s_final, ShootOptions{s_final / 1024.0, false});
    }
  }
  return arc;
}

double geodesic_distance(const SurfaceChart& chart, ChartPoint p, ChartPoint q,
                         const ConnectOptions& opts) {
  if (opts.backend != ConnectOptions::Backend::Shooting) {
    if (chart.name == "sphere" && chart.has_embedding()) {
      double d = sphere_angle(sphere_embed(p), sphere_embed(q));
      if (d >= chart.connect_bound)
        throw ComputationError("ill-conditioned two-point distance: near-antipodal inputs");
      return d;
    }
    if (chart.flat) return (chart_plane(q) - chart_plane(p)).norm();
  }
  Vec2 dp = chart_plane(p) - chart_plane(q);
  if (dp.norm() < 1e-14) return 0.0;
  return geodesic_connect(chart, p, q, opts).length;
}

}  // namespace tcurve
