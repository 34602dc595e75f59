#include "tcurve/polygonal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace tcurve {

namespace {

// Distance between curve nodes in the ambient proxy used by the modulus:
// great-circle on the sphere, coordinate-plane on flat charts, Euclidean for
// planar curves, full geodesic distance otherwise.
struct NodeMetric {
  const SampledCurve& curve;
  double operator()(int i, int j) const {
    Vec2 a = curve.point[size_t(i)], b = curve.point[size_t(j)];
    if (curve.planar()) return (a - b).norm();
    const SurfaceChart& ch = *curve.chart;
    if (ch.name == "sphere")
      return sphere_angle(embed_point(ch, {a.x(), a.y()}), embed_point(ch, {b.x(), b.y()}));
    if (ch.flat) return (chart_plane(a) - chart_plane(b)).norm();
    return geodesic_distance(ch, {a.x(), a.y()}, {b.x(), b.y()});
  }
};

int node_of_param(const SampledCurve& curve, double s) {
  double h = curve.length / double(curve.nodes() - 1);
  return std::clamp(static_cast<int>(std::round(s / h)), 0, curve.nodes() - 1);
}

}  // namespace

double GeodesicPolygonal::length() const {
  double acc = 0.0;
  if (!arcs.empty()) {
    for (const auto& a : arcs) acc += a.length;
    return acc;
  }
  for (size_t i = 0; i + 1 < vertex.size(); ++i) acc += (vertex[i + 1] - vertex[i]).norm();
  if (closed && vertex.size() > 1) acc += (vertex.front() - vertex.back()).norm();
  return acc;
}

GeodesicPolygonal inscribe(const SampledCurve& curve, std::vector<double> partition) {
  if (partition.size() < 2) throw ValidationError("inscribe needs at least two parameters");
  std::sort(partition.begin(), partition.end());
  if (partition.front() < -1e-12 || partition.back() > curve.length + 1e-12)
    throw ValidationError("partition parameters must lie in [0, L]");

  const double h = curve.length / double(curve.nodes() - 1);

  // snap: prefer an exact structural corner within half a node spacing, else the
  // nearest grid node
  struct Snapped {
    double s;
    bool corner;
    int node;
  };
  std::vector<Snapped> snapped;
  for (double s : partition) {
    bool corner = false;
    double s_use = s;
    for (const auto& j : curve.jumps) {
      double sj = j.at_junction ? 0.0 : j.s;  // the wrap corner lives at the basepoint
      if (std::abs(s - sj) <= 0.5 * h || std::abs(s - j.s) <= 0.5 * h) {
        s_use = sj;
        corner = true;
        break;
      }
    }
    int node = corner ? -1 : node_of_param(curve, s);
    if (!corner) s_use = curve.s[node];
    if (curve.closed && s_use >= curve.length - 1e-12) {
      s_use = 0.0;  // wrap duplicate of the basepoint
      node = 0;
    }
    snapped.push_back({s_use, corner, node});
  }
  std::sort(snapped.begin(), snapped.end(), [](const Snapped& a, const Snapped& b) { return a.s < b.s; });
  snapped.erase(std::unique(snapped.begin(), snapped.end(),
                            [](const Snapped& a, const Snapped& b) { return std::abs(a.s - b.s) < 1e-12; }),
                snapped.end());
  if (curve.closed && (snapped.empty() || snapped.front().s > 1e-12))
    snapped.insert(snapped.begin(), {0.0, false, 0});  // closed inscription always keeps the basepoint

  GeodesicPolygonal poly;
  poly.chart = curve.chart;
  poly.closed = curve.closed;
  for (const auto& sn : snapped) {
    poly.params.push_back(sn.s);
    if (sn.corner) {
      Vec2 x;
      curve.state_at(sn.s, &x, nullptr);
      poly.vertex.push_back(x);
    } else {
      poly.vertex.push_back(curve.point[size_t(sn.node)]);
    }
  }
  if (poly.vertex.size() < 2) throw ValidationError("inscription collapsed to fewer than two vertices");

  if (!curve.planar()) {
    size_t segs = poly.segment_count();
    for (size_t i = 0; i < segs; ++i) {
      const Vec2& a = poly.vertex[i];
      const Vec2& b = poly.vertex[(i + 1) % poly.vertex.size()];
      try {
        poly.arcs.push_back(geodesic_connect(*curve.chart, {a.x(), a.y()}, {b.x(), b.y()}));
      } catch (const ComputationError& e) {
        std::ostringstream os;
        os << "connection failed for polygonal segment " << i << ": " << e.what();
        throw ComputationError(os.str());
      }
    }
  }
  return poly;
}

double mesh_of(const SampledCurve& curve, const GeodesicPolygonal& poly) {
  double worst = 0.0;
  for (size_t i = 0; i + 1 < poly.params.size(); ++i)
    worst = std::max(worst, poly.params[i + 1] - poly.params[i]);
  if (poly.closed) worst = std::max(worst, curve.length - poly.params.back() + poly.params.front());
  return worst;
}

double modulus_of(const SampledCurve& curve, const GeodesicPolygonal& poly, int subsamples) {
  NodeMetric dist{curve};
  const int last = curve.nodes() - 1;
  const double h = curve.length / double(last);
  double worst = 0.0;
  size_t segs = poly.segment_count();
  for (size_t i = 0; i < segs; ++i) {
    double s0 = poly.params[i];
    bool wrap = (i + 1 == poly.params.size());
    double s1 = wrap ? curve.length + poly.params[0] : poly.params[i + 1];
    int n0 = static_cast<int>(std::llround(s0 / h));
    int n1 = static_cast<int>(std::llround(s1 / h));  // virtual index, may pass the end
    int span = n1 - n0;
    if (span <= 0) continue;
    int m = std::max(2, std::min(subsamples, span + 1));
    std::vector<int> idx(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
      int v = n0 + static_cast<int>(std::llround(double(span) * double(k) / double(m - 1)));
      idx[size_t(k)] = (v <= last) ? v : v - last;  // closed curves identify node `last` with 0
    }
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) worst = std::max(worst, dist(idx[size_t(a)], idx[size_t(b)]));
  }
  return worst;
}

std::vector<double> turning_angles(const GeodesicPolygonal& poly) {
  std::vector<double> turns;
  size_t nv = poly.vertex.size();
  if (!poly.arcs.empty()) {
    size_t segs = poly.arcs.size();
    for (size_t i = 0; i + 1 < segs + (poly.closed ? 1 : 0); ++i) {
      const GeodesicArc& in = poly.arcs[i % segs];
      const GeodesicArc& out = poly.arcs[(i + 1) % segs];
      if (in.length < 1e-14 || out.length < 1e-14)
        throw ComputationError("degenerate corner: zero-length polygonal arc");
      ChartPoint at = out.start;
      turns.push_back(chart_angle(*poly.chart, at, in.end_direction(), out.direction));
    }
    return turns;
  }
  // planar chords
  auto chord = [&](size_t i) {
    Vec2 d = poly.vertex[(i + 1) % nv] - poly.vertex[i % nv];
    double len = d.norm();
    if (len < 1e-14) throw ComputationError("degenerate corner: repeated polygonal vertex");
    return Vec2(d / len);
  };
  size_t segs = poly.segment_count();
  for (size_t i = 0; i + 1 < segs + (poly.closed ? 1 : 0); ++i)
    turns.push_back(oriented_angle(chord(i % segs), chord((i + 1) % segs)));
  return turns;
}

double rotation_of(const GeodesicPolygonal& poly) {
  double acc = 0.0;
  for (double t : turning_angles(poly)) acc += std::abs(t);
  return acc;
}

double euclidean_rotation_of(const std::vector<Vec3>& points, bool closed) {
  size_t n = points.size();
  if (n < 3) return 0.0;
  size_t segs = closed ? n : n - 1;
  auto chord = [&](size_t i) {
    Vec3 d = points[(i + 1) % n] - points[i % n];
    double len = d.norm();
    if (len < 1e-14) throw ComputationError("repeated vertices in the chord polyline");
    return Vec3(d / len);
  };
  double acc = 0.0;
  for (size_t i = 0; i + 1 < segs + (closed ? 1 : 0); ++i)
    acc += sphere_angle(chord(i % segs), chord((i + 1) % segs));
  return acc;
}

double euclidean_rotation_of(const GeodesicPolygonal& poly) {
  std::vector<Vec3> pts;
  pts.reserve(poly.vertex.size());
  for (const auto& v : poly.vertex) {
    if (poly.chart) {
      if (!poly.chart->has_embedding())
        throw ComputationError("euclidean rotation needs an embedding");
      pts.push_back(embed_point(*poly.chart, {v.x(), v.y()}));
    } else {
      pts.push_back(Vec3(v.x(), v.y(), 0.0));
    }
  }
  return euclidean_rotation_of(pts, poly.closed);
}

std::vector<std::vector<double>> refinement_schedule(const SampledCurve& curve,
                                                     const RefinementStrategy& strategy) {
  std::vector<double> corners;
  corners.push_back(0.0);
  for (const auto& j : curve.jumps)
    if (!j.at_junction) corners.push_back(j.s);
  if (!curve.closed) corners.push_back(curve.length);

  auto with_corners = [&](std::set<double> base) {
    for (double c : corners) base.insert(c);
    return std::vector<double>(base.begin(), base.end());
  };

  std::vector<std::vector<double>> schedule;
  switch (strategy.kind) {
    case RefinementStrategy::Kind::UniformDoubling: {
      for (int round = 0; round < strategy.rounds; ++round) {
        int count = strategy.initial << round;
        std::set<double> part;
        for (int i = 0; i < count; ++i) part.insert(curve.length * double(i) / double(count));
        if (!curve.closed) part.insert(curve.length);
        schedule.push_back(with_corners(std::move(part)));
      }
      break;
    }
    case RefinementStrategy::Kind::RandomNested: {
      std::mt19937 rng(strategy.seed);
      std::uniform_real_distribution<double> uni(0.0, curve.length);
      std::set<double> part;
      for (int i = 0; i < strategy.initial; ++i)
        part.insert(curve.length * double(i) / double(strategy.initial));
      if (!curve.closed) part.insert(curve.length);
      for (int round = 0; round < strategy.rounds; ++round) {
        size_t want = part.size() * 2;
        while (part.size() < want) part.insert(uni(rng));
        schedule.push_back(with_corners(part));
      }
      break;
    }
    case RefinementStrategy::Kind::ModulusTargets: {
      if (strategy.modulus_targets.empty())
        throw ValidationError("modulus-target schedule needs at least one target");
      const double h = curve.length / double(curve.nodes() - 1);
      std::set<double> part;
      int count = std::max(2, strategy.initial);
      for (int i = 0; i < count; ++i) part.insert(curve.length * double(i) / double(count));
      if (!curve.closed) part.insert(curve.length);
      for (double target : strategy.modulus_targets) {
        if (target < 4.0 * h)
          throw ValidationError("modulus target is below the resolution of the curve sampling");
        for (;;) {
          auto current = with_corners(part);
          GeodesicPolygonal poly = inscribe(curve, current);
          // bisect every arc whose diameter is still above target
          bool split = false;
          size_t segs = poly.segment_count();
          for (size_t i = 0; i < segs; ++i) {
            std::vector<double> sub = {poly.params[i],
                                       (i + 1 < poly.params.size()) ? poly.params[i + 1]
                                                                    : curve.length};
            GeodesicPolygonal seg_poly;
            seg_poly.chart = poly.chart;
            seg_poly.closed = false;
            seg_poly.params = sub;
            seg_poly.vertex = {poly.vertex[i], poly.vertex[(i + 1) % poly.vertex.size()]};
            double diam = modulus_of(curve, seg_poly, strategy.modulus_subsamples);
            if (diam > target) {
              double mid = 0.5 * (sub[0] + sub[1]);
              if (sub[1] - sub[0] < 2.0 * h)
                throw ValidationError("modulus target is below the resolution of the curve sampling");
              part.insert(mid);
              split = true;
            }
          }
          if (!split) break;
        }
        schedule.push_back(with_corners(part));
      }
      break;
    }
  }
  return schedule;
}

}  // namespace tcurve
