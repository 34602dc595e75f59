#include "tcurve/transport.hpp"

#include <algorithm>
#include <cmath>

namespace tcurve {

namespace {

// 4th-order finite differences on a uniform run [a, b] of a column.
void fd_run(const Eigen::VectorXd& f, int a, int b, double h, Eigen::VectorXd& out) {
  int len = b - a + 1;
  if (len < 2) {
    out[a] = 0.0;
    return;
  }
  if (len < 5) {
    for (int i = a; i <= b; ++i) {
      if (i == a)
        out[i] = (f[i + 1] - f[i]) / h;
      else if (i == b)
        out[i] = (f[i] - f[i - 1]) / h;
      else
        out[i] = (f[i + 1] - f[i - 1]) / (2 * h);
    }
    return;
  }
  out[a] = (-25 * f[a] + 48 * f[a + 1] - 36 * f[a + 2] + 16 * f[a + 3] - 3 * f[a + 4]) / (12 * h);
  out[a + 1] = (-3 * f[a] - 10 * f[a + 1] + 18 * f[a + 2] - 6 * f[a + 3] + f[a + 4]) / (12 * h);
  for (int i = a + 2; i <= b - 2; ++i)
    out[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
  out[b - 1] = (3 * f[b] + 10 * f[b - 1] - 18 * f[b - 2] + 6 * f[b - 3] - f[b - 4]) / (12 * h);
  out[b] = (25 * f[b] - 48 * f[b - 1] + 36 * f[b - 2] - 16 * f[b - 3] + 3 * f[b - 4]) / (12 * h);
}

// node ranges that do not cross a piece boundary
std::vector<std::pair<int, int>> piece_runs(const SampledCurve& curve) {
  std::vector<std::pair<int, int>> runs;
  int start = 0;
  for (int i = 1; i < curve.nodes(); ++i) {
    if (curve.piece_of[size_t(i)] != curve.piece_of[size_t(i - 1)]) {
      runs.emplace_back(start, i - 1);
      start = i;
    }
  }
  runs.emplace_back(start, curve.nodes() - 1);
  return runs;
}

struct OdeContext {
  const SampledCurve& curve;
  TransportBackend backend;
  bool planar;

  Vec2 rhs(int piece, double s, const Vec2& y) const {
    if (planar) return Vec2(0, 0);  // the plane transports fields unchanged
    Vec2 x, v;
    curve.state_in_piece(piece, s, &x, &v);
    const SurfaceChart& ch = *curve.chart;
    if (backend == TransportBackend::SphereFrame) {
      double w = std::cos(x.x()) * v.y();
      return Vec2(w * y.y(), -w * y.x());
    }
    double g = ch.g(x.x(), x.y());
    double gr = ch.g_r(x.x(), x.y());
    double gphi = ch.g_phi(x.x(), x.y());
    double G_r_pp = -0.5 * gr;
    double G_p_rp = gr / (2.0 * g);
    double G_p_pp = gphi / (2.0 * g);
    return Vec2(-G_r_pp * v.y() * y.y(),
                -G_p_rp * (v.x() * y.y() + v.y() * y.x()) - G_p_pp * v.y() * y.y());
  }

  // One RK4 step. Steps never cross a corner, so the whole step is evaluated
  // one-sidedly inside the piece that owns its midpoint.
  Vec2 step(double s0, double s1, Vec2 y) const {
    double h = s1 - s0;
    if (h <= 0 || planar) return y;
    int piece = curve.piece_at(0.5 * (s0 + s1));
    Vec2 k1 = rhs(piece, s0, y);
    Vec2 k2 = rhs(piece, s0 + 0.5 * h, y + 0.5 * h * k1);
    Vec2 k3 = rhs(piece, s0 + 0.5 * h, y + 0.5 * h * k2);
    Vec2 k4 = rhs(piece, s1, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // orthonormal components of the ODE state at arc length s
  Vec2 ortho(double s, const Vec2& y) const {
    if (planar || backend == TransportBackend::SphereFrame) return y;
    Vec2 x;
    curve.state_at(s, &x, nullptr);
    double g = curve.chart->g(x.x(), x.y());
    return Vec2(y.x(), std::sqrt(g) * y.y());
  }

  // orthonormal components of a one-sided tangent at a jump
  Vec2 tau_side(const TangentJump& j, bool incoming) const {
    Vec2 d = incoming ? j.in_dir : j.out_dir;
    if (planar) return d;
    Vec2 x;
    curve.state_at(j.s, &x, nullptr);
    return ortho_components(*curve.chart, ChartPoint{x.x(), x.y()}, d);
  }
};

}  // namespace

double AngleSeries::ac_total() const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < theta.size(); ++i) acc += std::abs(theta[i + 1] - theta[i]);
  return acc;
}

double AngleSeries::jump_total() const {
  double acc = 0.0;
  for (const auto& j : jumps) acc += std::abs(j.amount());
  return acc;
}

double AngleSeries::span_without_junction() const {
  double span = theta[theta.size() - 1] - theta[0];
  for (const auto& j : jumps)
    if (!j.at_junction) span += j.amount();
  return span;
}

double AngleSeries::junction_amount() const {
  for (const auto& j : jumps)
    if (j.at_junction) return j.amount();
  return 0.0;
}

double AngleSeries::value_at(int i) const {
  double v = theta[i];
  for (const auto& j : jumps)
    if (j.s < s[i] - 1e-14) v += j.amount();
  return v;
}

std::pair<TransportState, AngleSeries> transport_along(const SampledCurve& curve, Vec2 X0_ortho,
                                                       TransportBackend backend) {
  if (std::abs(X0_ortho.norm() - 1.0) > 1e-6)
    throw ValidationError("transport needs a unit initial tangent");

  const int n = curve.nodes();
  TransportState state;
  state.alpha.resize(n);
  state.beta.resize(n);
  AngleSeries series;
  series.s = curve.s;
  series.theta.resize(n);
  series.singular_mass = curve.cantor_mass;

  TransportBackend effective = backend;
  if (!curve.planar()) {
    if (effective == TransportBackend::Auto)
      effective = (curve.chart->name == "sphere") ? TransportBackend::SphereFrame
                                                  : TransportBackend::ChartChristoffel;
    if (effective == TransportBackend::SphereFrame && curve.chart->name != "sphere")
      throw ValidationError("the sphere-frame transport backend needs the sphere chart");
  }

  OdeContext ode{curve, effective, curve.planar()};

  // initial ODE state from orthonormal components
  Vec2 y = X0_ortho;
  if (!curve.planar() && effective == TransportBackend::ChartChristoffel) {
    Vec2 x0 = curve.point[0];
    double g0 = curve.chart->g(x0.x(), x0.y());
    y = Vec2(X0_ortho.x(), X0_ortho.y() / std::sqrt(g0));
  }

  // interior jump locations in (0, L)
  std::vector<const TangentJump*> interior;
  for (const auto& j : curve.jumps)
    if (!j.at_junction) interior.push_back(&j);
  size_t next_jump = 0;

  auto theta_raw = [&](double s_at, const Vec2& y_at, const Vec2& tau_o) {
    Vec2 Xo = ode.ortho(s_at, y_at);
    return oriented_angle(Xo, tau_o);
  };

  double acc = 0.0, prev_raw = 0.0, offset = 0.0;
  {
    Vec2 tau0 = curve.tau_ortho(0);
    prev_raw = theta_raw(0.0, y, tau0);
    acc = prev_raw;  // theta(0): angle from X0 to the initial tangent
    Vec2 Xo = ode.ortho(0.0, y);
    state.alpha[0] = Xo.x();
    state.beta[0] = Xo.y();
    series.theta[0] = acc;
  }
  for (int i = 0; i + 1 < n; ++i) {
    double s0 = curve.s[i], s1 = curve.s[i + 1];
    double cursor = s0;
    while (next_jump < interior.size() && interior[next_jump]->s <= s1 - 1e-14 &&
           interior[next_jump]->s > cursor + 1e-14) {
      const TangentJump& j = *interior[next_jump];
      y = ode.step(cursor, j.s, y);
      double raw_minus = theta_raw(j.s, y, ode.tau_side(j, true));
      acc += wrap_angle(raw_minus - prev_raw);
      AngleJumpRec rec;
      rec.s = j.s;
      rec.theta_minus = acc + offset;
      rec.jump = j.signed_angle;
      rec.theta_plus = rec.theta_minus + rec.jump;
      series.jumps.push_back(rec);
      offset += j.signed_angle;
      prev_raw = theta_raw(j.s, y, ode.tau_side(j, false));
      cursor = j.s;
      ++next_jump;
    }
    y = ode.step(cursor, s1, y);
    Vec2 tau1 = curve.tau_ortho(i + 1);
    double raw = theta_raw(s1, y, tau1);
    acc += wrap_angle(raw - prev_raw);
    prev_raw = raw;
    series.theta[i + 1] = acc;
    Vec2 Xo = ode.ortho(s1, y);
    state.alpha[i + 1] = Xo.x();
    state.beta[i + 1] = Xo.y();
  }
  // junction record for closed curves
  for (const auto& j : curve.jumps)
    if (j.at_junction) {
      AngleJumpRec rec;
      rec.s = curve.length;
      rec.at_junction = true;
      rec.theta_minus = acc + offset;
      rec.jump = j.signed_angle;
      rec.theta_plus = rec.theta_minus + rec.jump;
      series.jumps.push_back(rec);
    }
  return {state, series};
}

std::pair<TransportState, AngleSeries> transport_smooth(const SampledCurve& curve, Vec2 X0_ortho,
                                                        TransportBackend backend) {
  for (const auto& j : curve.jumps)
    if (!j.at_junction)
      throw ValidationError("transport_smooth needs a curve without tangent jumps; "
                            "use the piecewise driver");
  return transport_along(curve, X0_ortho, backend);
}

AngleSeries transport_polygonal(const GeodesicPolygonal& poly, Vec2 X0_ortho) {
  if (std::abs(X0_ortho.norm() - 1.0) > 1e-6)
    throw ValidationError("transport needs a unit initial tangent");
  std::vector<double> turns = turning_angles(poly);
  size_t segs = poly.segment_count();

  AngleSeries series;
  series.s.resize(Eigen::Index(segs) + 1);
  series.theta.resize(Eigen::Index(segs) + 1);

  double theta0;
  std::vector<double> lengths(segs);
  if (!poly.arcs.empty()) {
    Vec2 start_dir = ortho_components(*poly.chart, poly.arcs[0].start, poly.arcs[0].direction);
    theta0 = oriented_angle(X0_ortho, start_dir);
    for (size_t i = 0; i < segs; ++i) lengths[i] = poly.arcs[i].length;
  } else {
    Vec2 d = poly.vertex[1] - poly.vertex[0];
    theta0 = oriented_angle(X0_ortho, d.normalized());
    for (size_t i = 0; i < segs; ++i) {
      Vec2 seg = poly.vertex[(i + 1) % poly.vertex.size()] - poly.vertex[i];
      lengths[i] = seg.norm();
    }
  }
  series.s[0] = 0.0;
  for (size_t i = 0; i < segs; ++i) series.s[Eigen::Index(i) + 1] = series.s[Eigen::Index(i)] + lengths[i];
  series.theta.setConstant(theta0);  // constant on every arc: jumps carry all variation

  double offset = 0.0;
  for (size_t i = 0; i < turns.size(); ++i) {
    AngleJumpRec rec;
    bool wrap = poly.closed && (i + 1 == turns.size());
    rec.s = series.s[Eigen::Index(i) + 1];
    rec.at_junction = wrap;
    rec.theta_minus = theta0 + offset;
    rec.jump = turns[i];
    rec.theta_plus = rec.theta_minus + rec.jump;
    series.jumps.push_back(rec);
    offset += turns[i];
  }
  return series;
}

AngleSeries optimal_lift(const AngleSeries& series) {
  AngleSeries out;
  out.s = series.s;
  out.theta = series.theta;  // untouched: cos/sin stay bitwise stable
  out.singular_mass = series.singular_mass;
  out.lifted = true;
  double delta = 0.0;  // cumulative change of the pointwise offsets
  for (const auto& j : series.jumps) {
    double amount = j.amount();
    double reduced = wrap_angle(amount);
    AngleJumpRec rec;
    rec.s = j.s;
    rec.at_junction = j.at_junction;
    rec.theta_minus = j.theta_minus + delta;
    rec.jump = reduced;
    rec.theta_plus = rec.theta_minus + rec.jump;
    delta += reduced - amount;
    if (std::abs(reduced) > 1e-12) out.jumps.push_back(rec);
  }
  return out;
}

Eigen::VectorXd geodesic_curvature(const SampledCurve& curve, CurvatureBackend backend) {
  const int n = curve.nodes();
  Eigen::VectorXd out(n);
  for (const auto& pc : curve.pieces)
    if (pc.kind == PieceKind::Singular && backend != CurvatureBackend::ThetaDot)
      throw ValidationError("pointwise geodesic curvature is undefined on singular pieces");

  switch (backend) {
    case CurvatureBackend::ChartFormula: {
      if (curve.planar())
        throw ComputationError("the chart-formula curvature backend needs a chart");
      for (int i = 0; i < n; ++i) {
        Vec2 x = curve.point[size_t(i)], v = curve.velocity[size_t(i)], a = curve.accel[size_t(i)];
        double g = curve.chart->g(x.x(), x.y());
        double gr = curve.chart->g_r(x.x(), x.y());
        double gphi = curve.chart->g_phi(x.x(), x.y());
        out[i] = std::sqrt(g) * ((v.x() * a.y() - v.y() * a.x()) +
                                 0.5 * (gr * v.y() * v.y() * v.y() +
                                        2.0 * (gr / g) * v.x() * v.x() * v.y() +
                                        (gphi / g) * v.x() * v.y() * v.y()));
        if (curve.pieces[size_t(curve.piece_of[size_t(i)])].kind == PieceKind::Geodesic) out[i] = 0.0;
      }
      return out;
    }
    case CurvatureBackend::SphereFormula: {
      if (curve.planar() || curve.chart->name != "sphere")
        throw ComputationError("the sphere-formula curvature backend needs the sphere chart");
      for (int i = 0; i < n; ++i) {
        double th = curve.point[size_t(i)].x();
        Vec2 v = curve.velocity[size_t(i)], a = curve.accel[size_t(i)];
        double st = std::sin(th), ct = std::cos(th);
        out[i] = st * (a.y() * v.x() - a.x() * v.y()) +
                 ct * v.y() * (st * st * v.y() * v.y() + 2.0 * v.x() * v.x());
        if (curve.pieces[size_t(curve.piece_of[size_t(i)])].kind == PieceKind::Geodesic) out[i] = 0.0;
      }
      return out;
    }
    case CurvatureBackend::ThetaDot: {
      auto [state, series] = transport_along(curve, curve.tau_ortho(0));
      (void)state;
      double h = curve.length / double(n - 1);
      for (auto [a, b] : piece_runs(curve)) fd_run(series.theta, a, b, h, out);
      return out;
    }
  }
  return out;
}

double transport_identity_residual(const TransportState& state, const SampledCurve& curve) {
  if (curve.planar() || curve.chart->name != "sphere")
    throw ComputationError("the transport identity is specific to the sphere chart");
  const int n = curve.nodes();
  double h = curve.length / double(n - 1);
  Eigen::VectorXd da(n), db(n);
  for (auto [a, b] : piece_runs(curve)) {
    fd_run(state.alpha, a, b, h, da);
    fd_run(state.beta, a, b, h, db);
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double lhs = da[i] * state.beta[i] - state.alpha[i] * db[i];
    double rhs = std::cos(curve.point[size_t(i)].x()) * curve.velocity[size_t(i)].y();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double transport_norm_drift(const TransportState& state) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < state.alpha.size(); ++i) {
    double n2 = state.alpha[i] * state.alpha[i] + state.beta[i] * state.beta[i];
    worst = std::max(worst, std::abs(n2 - 1.0));
  }
  return worst;
}

}  // namespace tcurve
