#include "tcurve/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace tcurve {

namespace {

// Fit rotation(modulus) ~ limit + C modulus^p on the last three rows.
struct RowFit {
  double estimate = 0.0, order = 0.0;
  bool converged = false, oscillating = false, low_confidence = false;
};

RowFit fit_rows(const std::vector<RefinementRow>& rows, bool extrapolate) {
  RowFit fit;
  if (rows.empty()) throw ComputationError("refinement produced no rows");
  fit.estimate = rows.back().rotation;
  if (rows.size() < 3) return fit;
  double y1 = rows[rows.size() - 3].rotation;
  double y2 = rows[rows.size() - 2].rotation;
  double y3 = rows[rows.size() - 1].rotation;
  double d1 = y2 - y1, d2 = y3 - y2;
  double scale = std::max({1.0, std::abs(y1), std::abs(y3)});
  if (std::abs(d2) <= 1e-13 * scale && std::abs(d1) <= 1e-12 * scale) {
    fit.converged = true;
    return fit;
  }
  double q = (std::abs(d1) > 0) ? d2 / d1 : 0.0;
  if (q <= 0.0) {
    fit.oscillating = true;  // sign flip in the differences: keep the last row
    return fit;
  }
  if (q >= 0.97) {
    fit.low_confidence = true;  // stagnation: keep the last row
    return fit;
  }
  // a geometric tail is only trusted when the decay ratio has settled
  if (rows.size() >= 4) {
    double y0 = rows[rows.size() - 4].rotation;
    double d0 = y1 - y0;
    if (std::abs(d0) > 1e-13 * scale) {
      double q_prev = d1 / d0;
      if (q_prev <= 0.0 || std::abs(q / q_prev - 1.0) > 0.15) {
        fit.low_confidence = true;
        return fit;
      }
    }
  }
  double x2 = rows[rows.size() - 2].modulus, x3 = rows[rows.size() - 1].modulus;
  double rho = (x2 > 0 && x3 > 0 && x3 < x2) ? x3 / x2 : 0.5;
  fit.order = std::log(q) / std::log(rho);
  if (fit.order < 0.5) {
    fit.low_confidence = true;
    return fit;
  }
  if (extrapolate) fit.estimate = y3 + d2 * q / (1.0 - q);
  return fit;
}

RefinementRow make_row(const SampledCurve& curve, const GeodesicPolygonal& poly, int subsamples) {
  RefinementRow row;
  row.vertices = static_cast<int>(poly.vertex.size());
  row.mesh = mesh_of(curve, poly);
  row.modulus = modulus_of(curve, poly, subsamples);
  row.rotation = rotation_of(poly);
  try {
    row.euclid_rotation = euclidean_rotation_of(poly);
  } catch (const ComputationError&) {
    row.euclid_rotation = std::numeric_limits<double>::quiet_NaN();
  }
  row.length = poly.length();
  return row;
}

}  // namespace

TCReport total_intrinsic_curvature(const SampledCurve& curve, const RefinementStrategy& strategy) {
  TCReport report;
  report.seed = strategy.seed;
  report.refinement.modulus_subsamples = strategy.modulus_subsamples;
  auto schedule = refinement_schedule(curve, strategy);
  if (schedule.size() < 3)
    throw ValidationError("total_intrinsic_curvature needs at least three refinement rows");
  for (const auto& partition : schedule) {
    GeodesicPolygonal poly = inscribe(curve, partition);
    report.refinement.rows.push_back(make_row(curve, poly, strategy.modulus_subsamples));
  }
  RowFit fit = fit_rows(report.refinement.rows, /*extrapolate=*/true);
  report.estimate = fit.estimate;
  report.fitted_order = fit.order;
  report.converged = fit.converged;
  report.oscillating = fit.oscillating;
  report.low_confidence = fit.low_confidence || fit.oscillating;
  report.energy = energy_functional(curve);
  report.equality_gap = std::abs(report.estimate - report.energy.total());
  return report;
}

double euclidean_total_curvature(const SampledCurve& curve, RefinementReport* report,
                                 const RefinementStrategy* strategy) {
  if (!curve.planar() && !curve.chart->has_embedding())
    throw ComputationError("euclidean total curvature needs an embedding or a planar curve");
  RefinementStrategy strat;
  if (strategy) {
    strat = *strategy;
  } else {
    strat.initial = 64;
    int n = curve.nodes() - 1;
    strat.rounds = 1 + std::max(1, static_cast<int>(std::ceil(std::log2(double(n) / 64.0))));
  }
  auto schedule = refinement_schedule(curve, strat);
  std::vector<RefinementRow> rows;
  for (const auto& partition : schedule) {
    GeodesicPolygonal poly = inscribe(curve, partition);
    std::vector<Vec3> pts;
    pts.reserve(poly.vertex.size());
    for (const auto& v : poly.vertex)
      pts.push_back(curve.planar() ? Vec3(v.x(), v.y(), 0.0)
                                   : embed_point(*curve.chart, {v.x(), v.y()}));
    RefinementRow row;
    row.vertices = static_cast<int>(poly.vertex.size());
    row.mesh = mesh_of(curve, poly);
    row.modulus = modulus_of(curve, poly, strat.modulus_subsamples);
    row.rotation = euclidean_rotation_of(pts, poly.closed);
    row.euclid_rotation = row.rotation;
    double len = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) len += (pts[i + 1] - pts[i]).norm();
    if (poly.closed) len += (pts.front() - pts.back()).norm();
    row.length = len;
    rows.push_back(row);
  }
  if (report) report->rows = rows;
  // chord rotations increase under refinement toward the supremum, so the
  // finest row is the best certified estimate (one-sided error)
  return rows.back().rotation;
}

// ---------------------------------------------------------------------------
// Gauss-Bonnet: enclosed-region quadrature with winding-number classification
// ---------------------------------------------------------------------------

namespace {

struct TracePoint {
  Vec2 plane;
  double r, phi;
};

struct WindingQuadrature {
  const SurfaceChart& chart;
  std::vector<TracePoint> trace;  // closed: trace.front() == trace.back()
  double r0, r1, p0, p1;
  int grid;
  int max_depth;
  double hr, hp;
  std::vector<std::vector<int32_t>> cell_segments;
  Eigen::MatrixXi winding;  // per base cell center
  int boundary_cells = 0;

  int cell_index(int i, int j) const { return j * grid + i; }

  double integrand(double r, double phi) const {
    double g = chart.g(r, phi);
    if (g < chart.metric_floor) return 0.0;  // coordinate center: K sqrt(g) -> 0 mass
    double gr = chart.g_r(r, phi);
    double grr = chart.g_rr(r, phi);
    double K = -grr / (2.0 * g) + gr * gr / (4.0 * g * g);
    return K * std::sqrt(g);
  }

  // signed crossings of the directed curve with the directed segment p -> q;
  // returns the winding difference wind(q) - wind(p)
  int crossing_delta(const Vec2& p, const Vec2& q, const std::vector<int32_t>& segs) const {
    Vec2 r = q - p;
    int delta = 0;
    for (int32_t k : segs) {
      const Vec2& A = trace[size_t(k)].plane;
      const Vec2& B = trace[size_t(k) + 1].plane;
      Vec2 sAB = B - A;
      double denom = cross2(r, sAB);
      if (denom == 0.0) continue;
      double t = cross2(A - p, sAB) / denom;
      double u = cross2(A - p, r) / denom;
      if (t >= 0.0 && t < 1.0 && u >= 0.0 && u < 1.0) delta -= (cross2(r, sAB) > 0) ? 1 : -1;
    }
    return delta;
  }

  bool segment_touches_box(int32_t k, double br0, double br1, double bp0, double bp1) const {
    const TracePoint& a = trace[size_t(k)];
    const TracePoint& b = trace[size_t(k) + 1];
    double rlo = std::min(a.r, b.r) - 1e-12, rhi = std::max(a.r, b.r) + 1e-12;
    double plo = std::min(a.phi, b.phi) - 1e-12, phi_hi = std::max(a.phi, b.phi) + 1e-12;
    return rhi >= br0 && rlo <= br1 && phi_hi >= bp0 && plo <= bp1;
  }

  double refine_cell(double cr0, double cp0, double crs, double cps, const Vec2& center_plane,
                     int wind_center, const std::vector<int32_t>& segs, int depth) {
    // drop segments that cannot touch this cell
    std::vector<int32_t> local;
    local.reserve(segs.size());
    for (int32_t k : segs)
      if (segment_touches_box(k, cr0, cr0 + crs, cp0, cp0 + cps)) local.push_back(k);
    double rc = cr0 + 0.5 * crs, pc = cp0 + 0.5 * cps;
    if (local.empty() || depth >= max_depth)
      return (wind_center == 1) ? integrand(rc, pc) * crs * cps : 0.0;

    double acc = 0.0;
    for (int ci = 0; ci < 2; ++ci)
      for (int cj = 0; cj < 2; ++cj) {
        double nr0 = cr0 + 0.5 * crs * ci, np0 = cp0 + 0.5 * cps * cj;
        double nrc = nr0 + 0.25 * crs, npc = np0 + 0.25 * cps;
        Vec2 child_plane = chart_plane(ChartPoint{nrc, npc});
        int wind_child = wind_center + crossing_delta(center_plane, child_plane, local);
        acc += refine_cell(nr0, np0, 0.5 * crs, 0.5 * cps, child_plane, wind_child, local,
                           depth + 1);
      }
    return acc;
  }

  double run() {
    hr = (r1 - r0) / double(grid);
    hp = (p1 - p0) / double(grid);
    cell_segments.assign(size_t(grid) * size_t(grid), {});
    auto mark = [&](int i, int j, int32_t seg) {
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= grid || jj < 0 || jj >= grid) continue;
          auto& list = cell_segments[size_t(cell_index(ii, jj))];
          if (list.empty() || list.back() != seg) list.push_back(seg);
        }
    };
    for (size_t k = 0; k + 1 < trace.size(); ++k) {
      for (int side = 0; side < 2; ++side) {
        const TracePoint& tp = trace[k + size_t(side)];
        int i = std::clamp(static_cast<int>((tp.r - r0) / hr), 0, grid - 1);
        int j = std::clamp(static_cast<int>((tp.phi - p0) / hp), 0, grid - 1);
        mark(i, j, static_cast<int32_t>(k));
      }
    }
    for (auto& list : cell_segments) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    // row scan: signed ray crossings per row angle, then suffix sums over radius
    winding.resize(grid, grid);
    for (int j = 0; j < grid; ++j) {
      double pc = p0 + (double(j) + 0.5) * hp;
      Vec2 d(std::cos(pc), std::sin(pc));
      std::vector<std::pair<double, int>> crossings;
      double c_prev = cross2(d, trace[0].plane);
      for (size_t k = 0; k + 1 < trace.size(); ++k) {
        double c_next = cross2(d, trace[k + 1].plane);
        if ((c_prev > 0.0) != (c_next > 0.0)) {
          double u = c_prev / (c_prev - c_next);
          Vec2 x = trace[k].plane + u * (trace[k + 1].plane - trace[k].plane);
          double rho = d.dot(x);
          if (rho > 0.0) crossings.emplace_back(rho, (c_next > c_prev) ? 1 : -1);
        }
        c_prev = c_next;
      }
      std::sort(crossings.begin(), crossings.end());
      for (int i = grid - 1, ci = static_cast<int>(crossings.size()), acc = 0; i >= 0; --i) {
        double rc = r0 + (double(i) + 0.5) * hr;
        while (ci > 0 && crossings[size_t(ci) - 1].first > rc) {
          acc += crossings[size_t(ci) - 1].second;
          --ci;
        }
        winding(i, j) = acc;
      }
    }

    // orientation / simplicity guard
    int w_min = winding.minCoeff(), w_max = winding.maxCoeff();
    if (w_min < 0)
      throw ComputationError("curve is negatively oriented w.r.t. the chart orientation "
                             "(or self-intersecting)");
    if (w_max > 1) throw ComputationError("self-intersection detected: winding number above 1");

    double acc = 0.0;
    for (int j = 0; j < grid; ++j)
      for (int i = 0; i < grid; ++i) {
        const auto& segs = cell_segments[size_t(cell_index(i, j))];
        double cr0 = r0 + double(i) * hr, cp0 = p0 + double(j) * hp;
        if (segs.empty()) {
          if (winding(i, j) == 1)
            acc += integrand(cr0 + 0.5 * hr, cp0 + 0.5 * hp) * hr * hp;
        } else {
          ++boundary_cells;
          Vec2 center_plane = chart_plane(ChartPoint{cr0 + 0.5 * hr, cp0 + 0.5 * hp});
          acc += refine_cell(cr0, cp0, hr, hp, center_plane, winding(i, j), segs, 0);
        }
      }
    return acc;
  }
};

}  // namespace

GaussBonnetReport gauss_bonnet_check(const SampledCurve& curve, const GaussBonnetOptions& opts) {
  if (!curve.closed) throw ValidationError("gauss_bonnet_check needs a simple closed curve");
  if (curve.planar()) throw ValidationError("gauss_bonnet_check needs a curve on a chart");
  const SurfaceChart& chart = *curve.chart;

  // bounding box of the curve in chart coordinates
  double rmin = 1e300, rmax = -1e300, pmin = 1e300, pmax = -1e300;
  for (const auto& x : curve.point) {
    rmin = std::min(rmin, x.x());
    rmax = std::max(rmax, x.x());
    pmin = std::min(pmin, x.y());
    pmax = std::max(pmax, x.y());
  }
  int pole_winding = static_cast<int>(std::llround((pmax - pmin) / (2.0 * M_PI)));
  // A curve winding around the coordinate center spans phi by a full period;
  // otherwise pad the phi box. The r box is padded and, when the region wraps
  // the center, extended down to it (K sqrt g carries no mass there).
  WindingQuadrature wq{chart, {}, 0, 0, 0, 0, opts.grid, opts.max_depth, 0, 0, {}, {}, 0};
  double pad_r = 2.0 * (rmax - rmin + 0.1) / double(opts.grid);
  wq.r0 = (pole_winding != 0) ? 0.0 : std::max(0.0, rmin - pad_r);
  wq.r1 = rmax + pad_r;
  if (pole_winding != 0) {
    wq.p0 = pmin;
    wq.p1 = pmin + 2.0 * M_PI;
  } else {
    double pad_p = 2.0 * (pmax - pmin + 0.1) / double(opts.grid);
    wq.p0 = pmin - pad_p;
    wq.p1 = pmax + pad_p;
  }
  if (rmax > chart.r_max - 1e-6 || (rmin < chart.r_min + 1e-6 && pole_winding == 0))
    throw ComputationError("enclosed region touches the chart boundary");

  // dense closed trace: consecutive samples under half a cell apart
  double g_min = 1e300;
  for (const auto& x : curve.point) g_min = std::min(g_min, chart.g(x.x(), x.y()));
  double hr = (wq.r1 - wq.r0) / double(opts.grid);
  double hp = (wq.p1 - wq.p0) / double(opts.grid);
  double step = 0.45 * std::min(hr, hp * std::sqrt(std::max(g_min, 1e-12)));
  int n_tr = std::clamp(static_cast<int>(std::ceil(curve.length / step)), 256, 400000);
  wq.trace.reserve(size_t(n_tr) + 1);
  for (int k = 0; k <= n_tr; ++k) {
    double s = curve.length * double(k) / double(n_tr);
    Vec2 x;
    curve.state_at(s, &x, nullptr);
    wq.trace.push_back({chart_plane(x), x.x(), x.y()});
  }
  wq.trace.back() = wq.trace.front();  // exact closure

  GaussBonnetReport report;
  report.grid = opts.grid;
  report.area_integral = wq.run();
  report.boundary_cells = wq.boundary_cells;

  auto [state, series] = transport_along(curve, curve.tau_ortho(0));
  (void)state;
  AngleSeries lifted = optimal_lift(series);
  report.theta_span = lifted.span_without_junction();
  double alpha = 0.0;
  for (const auto& j : curve.jumps)
    if (j.at_junction) alpha = j.signed_angle;
  report.alpha = alpha;
  report.residual = std::abs(report.area_integral - (2.0 * M_PI - report.theta_span - alpha));
  return report;
}

SampledCurve develop(const SampledCurve& curve) {
  if (curve.planar()) throw ValidationError("develop expects a curve on a flat chart");
  if (!curve.chart->flat)
    throw ValidationError("develop needs a chart with zero Gauss curvature (g = r^2)");
  std::vector<CurvePiece> pieces;
  for (const auto& pc : curve.pieces) {
    if (pc.kind == PieceKind::Singular)
      throw ValidationError("develop does not support singular pieces");
    CurvePiece planar;
    planar.kind = pc.kind;
    planar.t0 = pc.t0;
    planar.t1 = pc.t1;
    auto pos = pc.pos;
    auto vel = pc.vel;
    auto acc = pc.acc;
    planar.pos = [pos](double t) {
      Vec2 x = pos(t);
      return Vec2(x.x() * std::cos(x.y()), x.x() * std::sin(x.y()));
    };
    planar.vel = [pos, vel](double t) {
      Vec2 x = pos(t), v = vel(t);
      double c = std::cos(x.y()), s = std::sin(x.y());
      return Vec2(v.x() * c - x.x() * v.y() * s, v.x() * s + x.x() * v.y() * c);
    };
    planar.acc = [pos, vel, acc](double t) {
      Vec2 x = pos(t), v = vel(t), a = acc(t);
      double c = std::cos(x.y()), s = std::sin(x.y());
      double radial = a.x() - x.x() * v.y() * v.y();
      double angular = x.x() * a.y() + 2.0 * v.x() * v.y();
      return Vec2(radial * c - angular * s, radial * s + angular * c);
    };
    pieces.push_back(std::move(planar));
  }
  return arc_length_param(nullptr, std::move(pieces), curve.nodes() - 1);
}

EnvelopeParallel envelope_chart_of_parallel(double colatitude, int n) {
  if (!(colatitude > 0.0) || colatitude > M_PI / 2.0)
    throw ValidationError("envelope chart needs a colatitude in (0, pi/2]");
  if (std::abs(colatitude - M_PI / 2.0) < 1e-12)
    throw ValidationError("geodesic case: the parallel at colatitude pi/2 is a great circle with "
                          "zero geodesic curvature; its tangent-plane envelope degenerates");
  EnvelopeParallel out;
  out.chart = flat_polar_chart();
  double radius = std::tan(colatitude);
  double rate = 1.0 / std::tan(colatitude);
  CurvePiece piece;
  piece.kind = PieceKind::Smooth;
  piece.t0 = 0.0;
  piece.t1 = 2.0 * M_PI * std::sin(colatitude);
  piece.pos = [radius, rate](double t) { return Vec2(radius, rate * t); };
  piece.vel = [rate](double) { return Vec2(0.0, rate); };
  piece.acc = [](double) { return Vec2(0.0, 0.0); };
  out.curve = arc_length_param(out.chart, {piece}, n);
  return out;
}

}  // namespace tcurve
