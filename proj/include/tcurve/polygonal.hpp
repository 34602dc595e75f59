#pragma once

#include "tcurve/curve.hpp"

#include <vector>

namespace tcurve {

/// Geodesic polygonal inscribed in a curve: ordered vertices on the curve joined
/// by minimal geodesic arcs (straight chords for planar curves).
struct GeodesicPolygonal {
  ChartPtr chart;  // null -> planar chords
  bool closed = false;
  std::vector<double> params;   // curve parameters s_i of the vertices (ascending)
  std::vector<Vec2> vertex;     // chart (r, phi) or planar (x, y)
  std::vector<GeodesicArc> arcs;  // one per segment; empty for planar polygonals

  size_t segment_count() const { return closed ? vertex.size() : vertex.size() - 1; }
  double length() const;
};

/// Inscribe at the given strictly increasing parameters. Vertices snap to the
/// nearest grid node, except that parameters near a structural corner snap to
/// the exact corner, so a polygonal source reproduces itself.
GeodesicPolygonal inscribe(const SampledCurve& curve, std::vector<double> partition);

/// Largest parameter gap between consecutive vertices (wrap gap included).
double mesh_of(const SampledCurve& curve, const GeodesicPolygonal& poly);

/// Largest geodesic diameter of the curve arcs cut by consecutive vertices,
/// estimated from all pairs of `subsamples` evenly spaced nodes per arc.
double modulus_of(const SampledCurve& curve, const GeodesicPolygonal& poly, int subsamples = 64);

/// Signed turning angles at the corners (wrap corner included when closed).
std::vector<double> turning_angles(const GeodesicPolygonal& poly);
/// Rotation: the sum of unsigned turning angles.
double rotation_of(const GeodesicPolygonal& poly);

/// Rotation of the chord polyline through the embedded vertices.
double euclidean_rotation_of(const GeodesicPolygonal& poly);
double euclidean_rotation_of(const std::vector<Vec3>& points, bool closed);

struct RefinementStrategy {
  enum class Kind { UniformDoubling, ModulusTargets, RandomNested };
  Kind kind = Kind::UniformDoubling;
  int initial = 4;
  int rounds = 6;
  std::vector<double> modulus_targets;
  unsigned seed = 0x5eed;
  int modulus_subsamples = 64;
};

/// Nested partitions with decreasing mesh. Structural corner parameters (and the
/// basepoint of a closed curve) are always included.
std::vector<std::vector<double>> refinement_schedule(const SampledCurve& curve,
                                                     const RefinementStrategy& strategy);

struct RefinementRow {
  int vertices = 0;
  double mesh = 0, modulus = 0, rotation = 0, euclid_rotation = 0, length = 0;
};
struct RefinementReport {
  std::vector<RefinementRow> rows;
  int modulus_subsamples = 64;  // the reported modulus is a subsampled lower bound
};

}  // namespace tcurve
