#pragma once

#include "tcurve/chart.hpp"
#include "tcurve/geodesic.hpp"
#include "tcurve/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tcurve {

enum class PieceKind { Smooth, Geodesic, Singular };

/// One structural piece of a curve: closed-form chart functions with derivatives,
/// a geodesic arc, or a planar monotone-singular graph (Cantor-Vitali at depth k).
struct CurvePiece {
  PieceKind kind = PieceKind::Smooth;
  double t0 = 0.0, t1 = 1.0;
  std::function<Vec2(double)> pos;  // (r, phi) on a chart, (x, y) when planar
  std::function<Vec2(double)> vel;  // d/dt
  std::function<Vec2(double)> acc;  // d2/dt2 (Smooth and Geodesic pieces)
  int cantor_depth = 0;             // Singular pieces only
  std::function<double(double)> singular_value;  // v(t) for Singular pieces
};

/// One-sided tantrix data at a structural corner.
struct TangentJump {
  double s = 0.0;
  Vec2 in_dir, out_dir;        // unit-speed chart/planar components
  Vec3 tau_minus, tau_plus;    // embedded one-sided tantrix (z = 0 when planar)
  double angle = 0.0;          // d_{S^2}(tau-, tau+) = |signed_angle|
  double signed_angle = 0.0;   // oriented turn, counterclockwise-in-chart positive
  bool at_junction = false;    // the closed-curve wrap record at s = 0 == L
};

struct FrameSample {
  Vec3 t, n, u;  // tantrix, surface normal, conormal u = n x t
};

/// Arc-length parameterized curve on a uniform grid. `chart == nullptr` means a
/// planar curve with points (x, y). Tangents come from the piece derivatives,
/// never from finite differences of the points.
struct SampledCurve {
  ChartPtr chart;  // null -> planar
  bool closed = false;
  double length = 0.0;

  Eigen::VectorXd s;            // n+1 uniform nodes in [0, L]
  std::vector<Vec2> point;      // (r, phi) or (x, y) per node
  std::vector<Vec2> velocity;   // unit-speed d/ds per node
  std::vector<Vec2> accel;      // d2/ds2 per node (zero on Singular nodes)
  Eigen::VectorXd kappa_g;      // geodesic curvature per node (0 on Geodesic/Singular nodes)
  Eigen::VectorXd cantor_v;     // singular-piece v per node (0 elsewhere)
  std::vector<int> piece_of;    // owning piece per node
  std::vector<CurvePiece> pieces;
  std::vector<TangentJump> jumps;  // includes the junction record for closed curves
  double cantor_mass = 0.0;        // declared Cantor channel of the tantrix angle

  int nodes() const { return static_cast<int>(s.size()); }
  bool planar() const { return chart == nullptr; }
  ChartPoint chart_point(int i) const { return ChartPoint{point[size_t(i)].x(), point[size_t(i)].y()}; }

  /// Embedded tantrix at a node (chart embedding, or z = 0 for planar curves).
  Vec3 tau3(int i) const;
  /// Tangent components in the oriented orthonormal chart frame (identity for planar).
  Vec2 tau_ortho(int i) const;

  /// Evaluate position/velocity at an arbitrary arc length via the piece closures.
  void state_at(double s_query, Vec2* pos, Vec2* vel_s) const;
  /// As state_at, but pinned to one piece (one-sided evaluation at junctions).
  void state_in_piece(int piece, double s_query, Vec2* pos, Vec2* vel_s) const;
  /// Geodesic curvature at an arbitrary arc length (0 on Geodesic/Singular pieces).
  double kappa_at(double s_query) const;

  // retained arc-length tables (piece index -> cumulative length over a fine t grid)
  struct ParamTable {
    Eigen::VectorXd t, s;
    double s_offset = 0.0;
  };
  std::vector<ParamTable> tables;
  /// Map arc length to (piece, t). Junction parameters resolve to the incoming piece.
  std::pair<int, double> param_at(double s_query) const;
  int piece_at(double s_query) const;
  double invert_param(int piece, double s_query) const;
};

/// Uniform arc-length reparameterization of a continuous piece chain.
/// Throws ValidationError (with the gap location) if the chain is discontinuous.
SampledCurve arc_length_param(ChartPtr chart, std::vector<CurvePiece> pieces, int n);

struct TantrixField {
  std::vector<Vec3> tau;
  std::vector<TangentJump> jumps;
};
TantrixField tantrix_of(const SampledCurve& curve);

/// Darboux frames per node; requires an embedding (or a planar curve, where the
/// normal is e_z). Jump nodes carry the right-limit tangent; one-sided frames at
/// corners come from the jump records.
std::vector<FrameSample> darboux_frame(const SampledCurve& curve);

// Built-in generators (all arc-length parameterized on construction).
SampledCurve parallel_curve(double colatitude, int n);
SampledCurve geodesic_polygon_curve(ChartPtr chart, const std::vector<ChartPoint>& vertices, int n,
                                    bool closed = true);
SampledCurve chart_smooth_curve(ChartPtr chart, const std::string& r_expr,
                                const std::string& phi_expr, double t0, double t1, int n);
SampledCurve planar_smooth_curve(const std::string& x_expr, const std::string& y_expr, double t0,
                                 double t1, int n);
/// Planar graph of the primitive of the Cantor-Vitali function at triadic depth k.
/// n = 0 picks a node count that resolves the depth-k structure.
SampledCurve cantor_graph_curve(int depth, int n = 0);
SampledCurve piecewise_curve(ChartPtr chart, std::vector<CurvePiece> pieces, int n);

/// Cantor-Vitali function at triadic depth k (exact, by recursion).
double cantor_vitali(double t, int depth);

}  // namespace tcurve
