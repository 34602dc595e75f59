#include "tcurve/curve.hpp"

#include "tcurve/expression.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tcurve {

namespace {

constexpr double kJumpThreshold = 1e-9;  // radians; separates corners from noise

double piece_speed(const SurfaceChart* chart, const CurvePiece& piece, double t) {
  Vec2 v = piece.vel(t);
  if (!chart) return v.norm();
  Vec2 x = piece.pos(t);
  double g = chart->g(x.x(), x.y());
  return std::sqrt(v.x() * v.x() + g * v.y() * v.y());
}

// d(speed)/dt, used for the chain rule when converting accelerations to the
// arc-length parameter.
double piece_speed_rate(const SurfaceChart* chart, const CurvePiece& piece, double t) {
  Vec2 v = piece.vel(t);
  Vec2 a = piece.acc ? piece.acc(t) : Vec2(0, 0);
  if (!chart) {
    double sp = v.norm();
    return sp > 0 ? v.dot(a) / sp : 0.0;
  }
  Vec2 x = piece.pos(t);
  double g = chart->g(x.x(), x.y());
  double gr = chart->g_r(x.x(), x.y());
  double gphi = chart->g_phi(x.x(), x.y());
  double sp = std::sqrt(v.x() * v.x() + g * v.y() * v.y());
  double dg_dt = gr * v.x() + gphi * v.y();
  double num = v.x() * a.x() + 0.5 * dg_dt * v.y() * v.y() + g * v.y() * a.y();
  return sp > 0 ? num / sp : 0.0;
}

// Composite Simpson over [a, b] with 2m cells.
template <typename F>
double simpson(const F& f, double a, double b, int m) {
  int n = 2 * std::max(1, m);
  double h = (b - a) / double(n);
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + h * double(i)) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double chart_kappa(const SurfaceChart& chart, const Vec2& x, const Vec2& v, const Vec2& a) {
  double g = chart.g(x.x(), x.y());
  double gr = chart.g_r(x.x(), x.y());
  double gphi = chart.g_phi(x.x(), x.y());
  double dr = v.x(), dphi = v.y();
  return std::sqrt(g) * ((dr * a.y() - dphi * a.x()) +
                         0.5 * (gr * dphi * dphi * dphi + 2.0 * (gr / g) * dr * dr * dphi +
                                (gphi / g) * dr * dphi * dphi));
}

double planar_kappa(const Vec2& v, const Vec2& a) { return cross2(v, a); }

}  // namespace

double cantor_vitali(double t, int depth) {
  t = std::clamp(t, 0.0, 1.0);
  double lo = 0.0, scale = 1.0;
  for (int k = 0; k < depth; ++k) {
    if (t < 1.0 / 3.0) {
      t *= 3.0;
      scale *= 0.5;
    } else if (t <= 2.0 / 3.0) {
      return lo + scale * 0.5;
    } else {
      t = 3.0 * t - 2.0;
      lo += scale * 0.5;
      scale *= 0.5;
    }
  }
  return lo + scale * t;
}

Vec3 SampledCurve::tau3(int i) const {
  const Vec2& v = velocity[size_t(i)];
  if (planar()) return Vec3(v.x(), v.y(), 0.0);
  if (!chart->has_embedding())
    throw ComputationError("embedded tantrix needs a chart with an embedding");
  return embed_tangent(*chart, chart_point(i), v);
}

Vec2 SampledCurve::tau_ortho(int i) const {
  const Vec2& v = velocity[size_t(i)];
  if (planar()) return v;
  return ortho_components(*chart, chart_point(i), v);
}

int SampledCurve::piece_at(double s_query) const {
  s_query = std::clamp(s_query, 0.0, length);
  for (size_t i = 0; i < tables.size(); ++i) {
    double end = tables[i].s_offset + tables[i].s[tables[i].s.size() - 1];
    if (s_query <= end + 1e-14 || i + 1 == tables.size()) return static_cast<int>(i);
  }
  return 0;
}

std::pair<int, double> SampledCurve::param_at(double s_query) const {
  int piece = piece_at(s_query);
  return {piece, invert_param(piece, s_query)};
}

double SampledCurve::invert_param(int piece, double s_query) const {
  s_query = std::clamp(s_query, 0.0, length);
  const ParamTable& tab = tables[size_t(piece)];
  double local = std::clamp(s_query - tab.s_offset, 0.0, tab.s[tab.s.size() - 1]);
  // bracket in the cumulative table, then polish with Newton on the speed
  const Eigen::VectorXd& S = tab.s;
  Eigen::Index lo = 0, hi = S.size() - 1;
  while (hi - lo > 1) {
    Eigen::Index mid = (lo + hi) / 2;
    if (S[mid] <= local)
      lo = mid;
    else
      hi = mid;
  }
  double t;
  if (S[hi] > S[lo])
    t = tab.t[lo] + (tab.t[hi] - tab.t[lo]) * (local - S[lo]) / (S[hi] - S[lo]);
  else
    t = tab.t[lo];
  const CurvePiece& pc = pieces[size_t(piece)];
  const SurfaceChart* ch = chart.get();
  for (int it = 0; it < 3; ++it) {
    // arc length from the bracketing table node to t, by 3-point Simpson
    double t_ref = tab.t[lo];
    double s_ref = S[lo];
    double mid = 0.5 * (t_ref + t);
    double seg = (t - t_ref) / 6.0 *
                 (piece_speed(ch, pc, t_ref) + 4.0 * piece_speed(ch, pc, mid) + piece_speed(ch, pc, t));
    double err = (s_ref + seg) - local;
    double sp = piece_speed(ch, pc, t);
    if (sp <= 0) break;
    t -= err / sp;
    t = std::clamp(t, pc.t0, pc.t1);
  }
  return t;
}

void SampledCurve::state_at(double s_query, Vec2* pos, Vec2* vel_s) const {
  state_in_piece(piece_at(s_query), s_query, pos, vel_s);
}

void SampledCurve::state_in_piece(int piece, double s_query, Vec2* pos, Vec2* vel_s) const {
  double t = invert_param(piece, s_query);
  const CurvePiece& pc = pieces[size_t(piece)];
  if (pos) *pos = pc.pos(t);
  if (vel_s) {
    double sp = piece_speed(chart.get(), pc, t);
    *vel_s = pc.vel(t) / (sp > 0 ? sp : 1.0);
  }
}

double SampledCurve::kappa_at(double s_query) const {
  auto [pi, t] = param_at(s_query);
  const CurvePiece& pc = pieces[size_t(pi)];
  if (pc.kind != PieceKind::Smooth) return 0.0;
  double sp = piece_speed(chart.get(), pc, t);
  Vec2 x = pc.pos(t), v = pc.vel(t) / sp;
  double rate = piece_speed_rate(chart.get(), pc, t);
  Vec2 a = (pc.acc(t) - rate * pc.vel(t) / sp) / (sp * sp);
  if (planar()) return planar_kappa(v, a);
  return chart_kappa(*chart, x, v, a);
}

SampledCurve arc_length_param(ChartPtr chart, std::vector<CurvePiece> pieces, int n) {
  if (pieces.empty()) throw ValidationError("arc_length_param needs at least one piece");
  if (n < 64) throw ValidationError("arc_length_param needs n >= 64 nodes");
  const SurfaceChart* ch = chart.get();

  // pole guard and continuity of the chain
  auto proxy = [&](const Vec2& x) { return ch ? chart_plane(x) : x; };
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (ch) {
      double r0 = pieces[i].pos(pieces[i].t0).x(), r1 = pieces[i].pos(pieces[i].t1).x();
      if (r0 < ch->pole_guard || r1 < ch->pole_guard)
        throw ValidationError("curve piece reaches below the chart pole guard r >= " +
                              std::to_string(ch->pole_guard));
    }
    if (i + 1 < pieces.size()) {
      Vec2 a = pieces[i].pos(pieces[i].t1), b = pieces[i + 1].pos(pieces[i + 1].t0);
      if ((proxy(a) - proxy(b)).norm() > 1e-8) {
        std::ostringstream os;
        os << "piece chain is discontinuous between pieces " << i << " and " << i + 1 << " (gap "
           << (proxy(a) - proxy(b)).norm() << ")";
        throw ValidationError(os.str());
      }
    }
  }

  SampledCurve curve;
  curve.chart = chart;
  curve.pieces = std::move(pieces);

  // cumulative arc length per piece over a fine parameter grid
  double total = 0.0;
  for (auto& pc : curve.pieces) {
    int cells = (pc.kind == PieceKind::Singular)
                    ? 2 * static_cast<int>(std::pow(3.0, std::min(pc.cantor_depth, 9))) : 4096;
    cells = std::clamp(cells, 256, 60000);
    SampledCurve::ParamTable tab;
    tab.t.resize(cells + 1);
    tab.s.resize(cells + 1);
    tab.s_offset = total;
    double h = (pc.t1 - pc.t0) / double(cells);
    tab.t[0] = pc.t0;
    tab.s[0] = 0.0;
    for (int j = 0; j < cells; ++j) {
      double a = pc.t0 + h * double(j), b = a + h;
      double seg = (b - a) / 6.0 *
                   (piece_speed(ch, pc, a) + 4.0 * piece_speed(ch, pc, 0.5 * (a + b)) +
                    piece_speed(ch, pc, b));
      tab.t[j + 1] = b;
      tab.s[j + 1] = tab.s[j] + seg;
    }
    total += tab.s[cells];
    curve.tables.push_back(std::move(tab));
  }
  curve.length = total;

  // uniform nodes
  curve.s.resize(n + 1);
  curve.point.resize(size_t(n) + 1);
  curve.velocity.resize(size_t(n) + 1);
  curve.accel.resize(size_t(n) + 1);
  curve.kappa_g.resize(n + 1);
  curve.cantor_v.resize(n + 1);
  curve.cantor_v.setZero();
  curve.piece_of.resize(size_t(n) + 1);
  for (int i = 0; i <= n; ++i) {
    double si = total * double(i) / double(n);
    curve.s[i] = si;
    auto [pi, t] = curve.param_at(si);
    const CurvePiece& pc = curve.pieces[size_t(pi)];
    curve.piece_of[size_t(i)] = pi;
    Vec2 x = pc.pos(t);
    double sp = piece_speed(ch, pc, t);
    Vec2 v = pc.vel(t) / sp;
    curve.point[size_t(i)] = x;
    curve.velocity[size_t(i)] = v;
    if (pc.kind == PieceKind::Singular) {
      curve.accel[size_t(i)] = Vec2(0, 0);
      curve.kappa_g[i] = 0.0;
      curve.cantor_v[i] = pc.singular_value(t);
    } else {
      double rate = piece_speed_rate(ch, pc, t);
      Vec2 a = (pc.acc(t) - rate * pc.vel(t) / sp) / (sp * sp);
      curve.accel[size_t(i)] = a;
      curve.kappa_g[i] =
          (pc.kind == PieceKind::Geodesic) ? 0.0 : (ch ? chart_kappa(*ch, x, v, a) : planar_kappa(v, a));
    }
  }

  // closed-curve detection and jump records at the structural junctions
  {
    const CurvePiece& first = curve.pieces.front();
    const CurvePiece& last = curve.pieces.back();
    Vec2 a = last.pos(last.t1), b = first.pos(first.t0);
    curve.closed = (proxy(a) - proxy(b)).norm() <= 1e-8;
  }
  auto side_dir = [&](const CurvePiece& pc, double t) {
    double sp = piece_speed(ch, pc, t);
    return Vec2(pc.vel(t) / sp);
  };
  auto record_jump = [&](double s_at, const CurvePiece& in, const CurvePiece& out, bool junction) {
    Vec2 din = side_dir(in, in.t1), dout = side_dir(out, out.t0);
    Vec2 x = out.pos(out.t0);
    double signed_turn;
    Vec3 tm, tp;
    if (ch) {
      ChartPoint cp{x.x(), x.y()};
      signed_turn = chart_angle(*ch, cp, din, dout);
      if (ch->has_embedding()) {
        tm = embed_tangent(*ch, cp, din);
        tp = embed_tangent(*ch, cp, dout);
      } else {
        Vec2 om = ortho_components(*ch, cp, din), op = ortho_components(*ch, cp, dout);
        tm = Vec3(om.x(), om.y(), 0.0);
        tp = Vec3(op.x(), op.y(), 0.0);
      }
    } else {
      signed_turn = oriented_angle(din, dout);
      tm = Vec3(din.x(), din.y(), 0.0);
      tp = Vec3(dout.x(), dout.y(), 0.0);
    }
    if (std::abs(signed_turn) <= kJumpThreshold) return;
    TangentJump j;
    j.s = s_at;
    j.in_dir = din;
    j.out_dir = dout;
    j.tau_minus = tm;
    j.tau_plus = tp;
    j.signed_angle = signed_turn;
    j.angle = std::abs(signed_turn);
    j.at_junction = junction;
    curve.jumps.push_back(j);
  };
  double acc_len = 0.0;
  for (size_t i = 0; i + 1 < curve.pieces.size(); ++i) {
    acc_len = curve.tables[i].s_offset + curve.tables[i].s[curve.tables[i].s.size() - 1];
    record_jump(acc_len, curve.pieces[i], curve.pieces[i + 1], false);
  }
  if (curve.closed) record_jump(curve.length, curve.pieces.back(), curve.pieces.front(), true);

  // declared Cantor channel: the tantrix-angle mass of the singular pieces
  double mass = 0.0;
  for (const auto& pc : curve.pieces) {
    if (pc.kind != PieceKind::Singular) continue;
    int cells = 2 * static_cast<int>(std::pow(3.0, std::min(pc.cantor_depth, 9)));
    double prev = std::atan(pc.singular_value(pc.t0));
    for (int j = 1; j <= cells; ++j) {
      double t = pc.t0 + (pc.t1 - pc.t0) * double(j) / double(cells);
      double cur = std::atan(pc.singular_value(t));
      mass += std::abs(cur - prev);
      prev = cur;
    }
  }
  curve.cantor_mass = mass;
  return curve;
}

TantrixField tantrix_of(const SampledCurve& curve) {
  TantrixField out;
  out.tau.reserve(size_t(curve.nodes()));
  bool embeddable = curve.planar() || curve.chart->has_embedding();
  for (int i = 0; i < curve.nodes(); ++i) {
    if (embeddable) {
      out.tau.push_back(curve.tau3(i));
    } else {
      Vec2 o = curve.tau_ortho(i);
      out.tau.push_back(Vec3(o.x(), o.y(), 0.0));
    }
  }
  out.jumps = curve.jumps;
  return out;
}

std::vector<FrameSample> darboux_frame(const SampledCurve& curve) {
  std::vector<FrameSample> frames(size_t(curve.nodes()));
  if (curve.planar()) {
    for (int i = 0; i < curve.nodes(); ++i) {
      Vec3 t = curve.tau3(i);
      Vec3 n(0, 0, 1);
      frames[size_t(i)] = {t, n, n.cross(t)};
    }
    return frames;
  }
  if (!curve.chart->has_embedding())
    throw ComputationError("darboux_frame needs an embedding (or a planar curve)");
  if (curve.chart->name != "sphere" && !curve.chart->flat)
    throw ComputationError("no surface normal available for chart '" + curve.chart->name + "'");
  for (int i = 0; i < curve.nodes(); ++i) {
    Vec3 t = curve.tau3(i);
    Vec3 n = curve.chart->name == "sphere" ? embed_point(*curve.chart, curve.chart_point(i))
                                           : Vec3(0, 0, 1);
    frames[size_t(i)] = {t, n, n.cross(t)};
  }
  return frames;
}

SampledCurve parallel_curve(double colatitude, int n) {
  auto chart = sphere_chart();
  if (colatitude < chart->pole_guard || colatitude > M_PI - chart->pole_guard)
    throw ValidationError("parallel colatitude must keep the trace away from the poles");
  double st = std::sin(colatitude);
  CurvePiece piece;
  piece.kind = PieceKind::Smooth;
  piece.t0 = 0.0;
  piece.t1 = 2.0 * M_PI * st;
  piece.pos = [colatitude, st](double t) { return Vec2(colatitude, t / st); };
  piece.vel = [st](double) { return Vec2(0.0, 1.0 / st); };
  piece.acc = [](double) { return Vec2(0.0, 0.0); };
  return arc_length_param(chart, {piece}, n);
}

SampledCurve geodesic_polygon_curve(ChartPtr chart, const std::vector<ChartPoint>& vertices, int n,
                                    bool closed) {
  if (vertices.size() < 2) throw ValidationError("geodesic polygon needs at least two vertices");
  std::vector<CurvePiece> pieces;
  size_t count = closed ? vertices.size() : vertices.size() - 1;
  ChartPoint cursor = vertices[0];
  for (size_t i = 0; i < count; ++i) {
    ChartPoint target = vertices[(i + 1) % vertices.size()];
    GeodesicArc arc = geodesic_connect(*chart, cursor, target);
    cursor = arc.end();
    CurvePiece piece;
    piece.kind = PieceKind::Geodesic;
    piece.t0 = 0.0;
    piece.t1 = arc.length;
    auto state = arc.state;
    piece.pos = [state](double t) {
      Vec4 y = state(t);
      return Vec2(y[0], y[1]);
    };
    piece.vel = [state](double t) {
      Vec4 y = state(t);
      return Vec2(y[2], y[3]);
    };
    const SurfaceChart* ch = chart.get();
    piece.acc = [state, ch](double t) {
      Vec4 y = state(t);
      double g = ch->g(y[0], y[1]);
      double gr = ch->g_r(y[0], y[1]);
      double gphi = ch->g_phi(y[0], y[1]);
      double ddr = 0.5 * gr * y[3] * y[3];
      double num = 2.0 * gr * y[2] * y[3] + gphi * y[3] * y[3];
      return Vec2(ddr, num == 0.0 ? 0.0 : -num / (2.0 * g));
    };
    pieces.push_back(std::move(piece));
  }
  return arc_length_param(chart, std::move(pieces), n);
}

namespace {

SampledCurve expression_curve(ChartPtr chart, const std::string& e0, const std::string& e1,
                              double t0, double t1, int n) {
  if (!(t1 > t0)) throw ValidationError("curve parameter interval needs t1 > t0");
  Expression f0 = Expression::parse(e0, {"t"});
  Expression f1 = Expression::parse(e1, {"t"});
  Expression d0 = f0.derivative("t"), d1 = f1.derivative("t");
  Expression dd0 = d0.derivative("t"), dd1 = d1.derivative("t");
  CurvePiece piece;
  piece.kind = PieceKind::Smooth;
  piece.t0 = t0;
  piece.t1 = t1;
  piece.pos = [f0, f1](double t) { return Vec2(f0(t), f1(t)); };
  piece.vel = [d0, d1](double t) { return Vec2(d0(t), d1(t)); };
  piece.acc = [dd0, dd1](double t) { return Vec2(dd0(t), dd1(t)); };
  return arc_length_param(std::move(chart), {piece}, n);
}

}  // namespace

SampledCurve chart_smooth_curve(ChartPtr chart, const std::string& r_expr,
                                const std::string& phi_expr, double t0, double t1, int n) {
  if (!chart) throw ValidationError("chart_smooth_curve needs a chart");
  return expression_curve(std::move(chart), r_expr, phi_expr, t0, t1, n);
}

SampledCurve planar_smooth_curve(const std::string& x_expr, const std::string& y_expr, double t0,
                                 double t1, int n) {
  return expression_curve(nullptr, x_expr, y_expr, t0, t1, n);
}

SampledCurve cantor_graph_curve(int depth, int n) {
  if (depth < 1 || depth > 12) throw ValidationError("cantor-graph depth must be in [1, 12]");
  if (n == 0) {
    // resolve the native triadic structure of the depth-k graph
    n = std::clamp(8 * static_cast<int>(std::pow(3.0, depth)), 256, 60000);
  }
  // primitive of v on the depth-k triadic grid (v is linear on each cell, so the
  // trapezoid cumulative is exact)
  int cells = static_cast<int>(std::pow(3.0, depth));
  auto v_at = [depth](double t) { return cantor_vitali(t, depth); };
  Eigen::VectorXd U(cells + 1);
  U[0] = 0.0;
  for (int j = 0; j < cells; ++j) {
    double a = double(j) / double(cells), b = double(j + 1) / double(cells);
    U[j + 1] = U[j] + 0.5 * (v_at(a) + v_at(b)) / double(cells);
  }
  auto primitive = [U, cells, v_at](double t) {
    t = std::clamp(t, 0.0, 1.0);
    double x = t * double(cells);
    int j = std::min(cells - 1, static_cast<int>(x));
    double a = double(j) / double(cells);
    double va = v_at(a), vb = v_at(double(j + 1) / double(cells));
    double dt = t - a;
    // exact integral of the linear interpolant on the cell
    double slope = (vb - va) * double(cells);
    return U[j] + va * dt + 0.5 * slope * dt * dt;
  };
  CurvePiece piece;
  piece.kind = PieceKind::Singular;
  piece.cantor_depth = depth;
  piece.t0 = 0.0;
  piece.t1 = 1.0;
  piece.pos = [primitive](double t) { return Vec2(t, primitive(t)); };
  piece.vel = [v_at](double t) { return Vec2(1.0, v_at(t)); };
  piece.singular_value = v_at;
  return arc_length_param(nullptr, {piece}, n);
}

SampledCurve piecewise_curve(ChartPtr chart, std::vector<CurvePiece> pieces, int n) {
  return arc_length_param(std::move(chart), std::move(pieces), n);
}

}  // namespace tcurve
