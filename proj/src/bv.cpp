#include "tcurve/bv.hpp"

#include <algorithm>
#include <cmath>

namespace tcurve {

namespace {

double metric_distance(SeriesMetric metric, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (metric == SeriesMetric::Euclidean) return (a - b).norm();
  double na = a.norm(), nb = b.norm();
  if (std::abs(na - 1.0) > 1e-6 || std::abs(nb - 1.0) > 1e-6)
    throw ValidationError("great-circle distances need unit-sphere values");
  if (a.size() == 3) {
    // cross-product form of the clamped-arccos distance: exact for tiny angles
    Vec3 va(a[0], a[1], a[2]), vb(b[0], b[1], b[2]);
    return sphere_angle(va, vb);
  }
  return clamped_acos(a.dot(b) / (na * nb));
}

// Composite Simpson of sampled |f| over a uniform node run; odd interval counts
// finish with a Simpson-3/8 tail.
double simpson_abs(const Eigen::MatrixXd& f, int a, int b, double h) {
  int m = b - a;
  if (m <= 0) return 0.0;
  auto val = [&](int i) { return f.col(i).norm(); };
  if (m == 1) return 0.5 * h * (val(a) + val(a + 1));
  if (m == 2) return h / 3.0 * (val(a) + 4.0 * val(a + 1) + val(a + 2));
  double acc = 0.0;
  int even_end = (m % 2 == 0) ? b : b - 3;
  for (int i = a; i < even_end; i += 2)
    acc += h / 3.0 * (val(i) + 4.0 * val(i + 1) + val(i + 2));
  if (m % 2 != 0) {
    int i = b - 3;
    acc += 3.0 * h / 8.0 * (val(i) + 3.0 * val(i + 1) + 3.0 * val(i + 2) + val(i + 3));
  }
  return acc;
}

}  // namespace

double essential_variation(const BVSeries& series, SeriesMetric metric, VariationBackend backend) {
  if (series.nodes() < 2) return 0.0;
  if (backend == VariationBackend::PartitionSum) {
    // partition points: the grid nodes plus the one-sided jump values
    double acc = 0.0;
    size_t next = 0;
    Eigen::VectorXd prev = series.values.col(0);
    for (int i = 1; i < series.nodes(); ++i) {
      while (next < series.jumps.size() && series.jumps[next].s <= series.s[i] - 1e-14) {
        acc += metric_distance(metric, prev, series.jumps[next].left);
        acc += metric_distance(metric, series.jumps[next].left, series.jumps[next].right);
        prev = series.jumps[next].right;
        ++next;
      }
      acc += metric_distance(metric, prev, series.values.col(i));
      prev = series.values.col(i);
    }
    for (; next < series.jumps.size(); ++next) {
      acc += metric_distance(metric, prev, series.jumps[next].left);
      acc += metric_distance(metric, series.jumps[next].left, series.jumps[next].right);
      prev = series.jumps[next].right;
    }
    return acc;
  }

  // structural backend
  double ac = 0.0;
  if (series.deriv.size() > 0) {
    double h = (series.s[series.s.size() - 1] - series.s[0]) / double(series.nodes() - 1);
    for (auto [a, b] : series.smooth_runs) ac += simpson_abs(series.deriv, a, b, h);
  } else {
    for (auto [a, b] : series.smooth_runs)
      for (int i = a; i < b; ++i)
        ac += metric_distance(metric, series.values.col(i), series.values.col(i + 1));
  }
  double jump = 0.0;
  for (const auto& j : series.jumps) jump += metric_distance(metric, j.left, j.right);
  return ac + jump + series.singular_mass;
}

BVBreakdown decompose(const BVSeries& series, SeriesMetric metric) {
  BVBreakdown out;
  if (series.deriv.size() > 0) {
    double h = (series.s[series.s.size() - 1] - series.s[0]) / double(series.nodes() - 1);
    for (auto [a, b] : series.smooth_runs) out.ac += simpson_abs(series.deriv, a, b, h);
  } else {
    for (auto [a, b] : series.smooth_runs)
      for (int i = a; i < b; ++i)
        out.ac += metric_distance(metric, series.values.col(i), series.values.col(i + 1));
  }
  for (const auto& j : series.jumps) out.jump += metric_distance(metric, j.left, j.right);
  out.cantor = series.singular_mass;

  double total = essential_variation(series, metric, VariationBackend::PartitionSum);
  double residual = std::abs(total - out.total());
  if (residual > std::max(1e-6, 1e-3 * out.total()))
    throw ComputationError("inconsistent series structure: partition-sum variation " +
                           std::to_string(total) + " vs components " + std::to_string(out.total()));
  return out;
}

BVSeries tantrix_series(const SampledCurve& curve) {
  const int n = curve.nodes();
  BVSeries out;
  out.s = curve.s;
  out.values.resize(3, n);
  bool embeddable = curve.planar() || curve.chart->has_embedding();
  for (int i = 0; i < n; ++i) {
    if (embeddable) {
      out.values.col(i) = curve.tau3(i);
    } else {
      Vec2 o = curve.tau_ortho(i);
      out.values.col(i) = Vec3(o.x(), o.y(), 0.0);
    }
  }
  for (const auto& j : curve.jumps) {
    BVSeries::Jump rec;
    rec.s = j.s;
    rec.left = j.tau_minus;
    rec.right = j.tau_plus;
    out.jumps.push_back(rec);
  }
  // derivative samples on smooth/geodesic runs: tau' = kappa_g u + kappa_n n
  bool have_deriv = curve.planar() || (curve.chart && curve.chart->name == "sphere") ||
                    (curve.chart && curve.chart->flat);
  bool any_singular = false;
  for (const auto& pc : curve.pieces) any_singular |= (pc.kind == PieceKind::Singular);
  if (have_deriv && !any_singular) {
    out.deriv.resize(3, n);
    std::vector<FrameSample> frames = darboux_frame(curve);
    bool on_sphere = curve.chart && curve.chart->name == "sphere";
    for (int i = 0; i < n; ++i) {
      double kn = on_sphere ? -1.0 : 0.0;  // normal curvature of unit-sphere curves
      out.deriv.col(i) = curve.kappa_g[i] * frames[size_t(i)].u + kn * frames[size_t(i)].n;
    }
  }
  // smooth runs: maximal node ranges inside one non-singular piece. Runs share
  // their boundary node with the previous run so every grid interval is
  // integrated exactly once (|tau'| is taken one-sided across the corner).
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    bool brk = (i == n) || curve.piece_of[size_t(i)] != curve.piece_of[size_t(i - 1)];
    if (brk) {
      if (curve.pieces[size_t(curve.piece_of[size_t(start)])].kind != PieceKind::Singular) {
        int from = start;
        if (from > 0 &&
            curve.pieces[size_t(curve.piece_of[size_t(from - 1)])].kind != PieceKind::Singular)
          --from;
        out.smooth_runs.emplace_back(from, i - 1);
      }
      start = i;
    }
  }
  if (any_singular) out.deriv.resize(0, 0);
  out.singular_mass = curve.cantor_mass;
  return out;
}

BVSeries angle_series_view(const AngleSeries& series) {
  BVSeries out;
  out.s = series.s;
  const int n = static_cast<int>(series.s.size());
  out.values.resize(1, n);
  for (int i = 0; i < n; ++i) out.values(0, i) = series.value_at(i);
  for (const auto& j : series.jumps) {
    BVSeries::Jump rec;
    rec.s = j.s;
    rec.left = Eigen::VectorXd::Constant(1, j.theta_minus);
    rec.right = Eigen::VectorXd::Constant(1, j.theta_plus);
    out.jumps.push_back(rec);
  }
  out.singular_mass = series.singular_mass;
  // runs between consecutive jumps
  int start = 0;
  size_t next = 0;
  for (int i = 0; i < n; ++i) {
    if (next < series.jumps.size() && series.jumps[next].s <= out.s[i] - 1e-14) {
      out.smooth_runs.emplace_back(start, i - 1 >= start ? i - 1 : start);
      start = i;
      ++next;
    }
  }
  out.smooth_runs.emplace_back(start, n - 1);
  return out;
}

BVBreakdown energy_functional(const SampledCurve& curve) {
  BVBreakdown out;
  // integral of |tau' . u| = |kappa_g| per piece, Simpson over the node run plus
  // exact end slivers evaluated through the piece closures
  const int n = curve.nodes();
  const double h = curve.length / double(n - 1);
  for (size_t pi = 0; pi < curve.pieces.size(); ++pi) {
    const CurvePiece& pc = curve.pieces[pi];
    double s0 = curve.tables[pi].s_offset;
    double s1 = s0 + curve.tables[pi].s[curve.tables[pi].s.size() - 1];
    if (pc.kind != PieceKind::Smooth) continue;  // geodesics and singular pieces carry no AC mass
    int first = static_cast<int>(std::ceil(s0 / h - 1e-12));
    int last = static_cast<int>(std::floor(s1 / h + 1e-12));
    first = std::clamp(first, 0, n - 1);
    last = std::clamp(last, 0, n - 1);
    double piece_acc = 0.0;
    if (last > first) {
      Eigen::MatrixXd k(1, n);
      for (int i = first; i <= last; ++i)
        k(0, i) = (curve.piece_of[size_t(i)] == int(pi)) ? curve.kappa_g[i] : curve.kappa_at(curve.s[i]);
      piece_acc += simpson_abs(k, first, last, h);
    }
    auto sliver = [&](double a, double b) {
      if (b - a < 1e-14) return 0.0;
      double mid = 0.5 * (a + b);
      return (b - a) / 6.0 *
             (std::abs(curve.kappa_at(a)) + 4.0 * std::abs(curve.kappa_at(mid)) +
              std::abs(curve.kappa_at(b)));
    };
    piece_acc += sliver(s0, curve.s[first]);
    piece_acc += sliver(curve.s[last], s1);
    out.ac += piece_acc;
  }
  for (const auto& j : curve.jumps) out.jump += j.angle;
  out.cantor = curve.cantor_mass;
  return out;
}

}  // namespace tcurve
