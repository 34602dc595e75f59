#pragma once

#include "tcurve/curve.hpp"
#include "tcurve/polygonal.hpp"

#include <utility>
#include <vector>

namespace tcurve {

/// Coefficients of the transported field in the oriented orthonormal chart frame.
struct TransportState {
  Eigen::VectorXd alpha, beta;  // per curve node; alpha^2 + beta^2 == 1 up to drift
};

struct AngleJumpRec {
  double s = 0.0;
  double theta_minus = 0.0, theta_plus = 0.0;  // pointwise one-sided values
  double jump = 0.0;                           // signed jump, stored exactly
  bool at_junction = false;
  double amount() const { return jump; }
};

/// Angle of the transported frame against the tantrix, as a BV series: grid
/// values hold the absolutely continuous representative (jump offsets live only
/// in the records), so lifting never rewrites a grid value.
struct AngleSeries {
  Eigen::VectorXd s;
  Eigen::VectorXd theta;
  std::vector<AngleJumpRec> jumps;
  double singular_mass = 0.0;
  bool lifted = false;

  double ac_total() const;    // partition-sum variation of the continuous part
  double jump_total() const;  // sum of |jump|
  double var_total() const { return ac_total() + jump_total() + singular_mass; }
  /// Theta(L) - Theta(0) through the signed interior jumps, junction excluded.
  double span_without_junction() const;
  double junction_amount() const;  // 0 when there is no junction record
  /// Pointwise representative at node i (grid value plus jumps before it).
  double value_at(int i) const;
};

enum class TransportBackend { Auto, SphereFrame, ChartChristoffel };

/// Parallel transport along a smooth curve (no tangent jumps allowed).
std::pair<TransportState, AngleSeries> transport_smooth(const SampledCurve& curve, Vec2 X0_ortho,
                                                        TransportBackend backend = TransportBackend::Auto);
/// Piecewise driver: integrates across pieces and records a signed jump of the
/// angle at each structural corner. X is continuous through corners.
std::pair<TransportState, AngleSeries> transport_along(const SampledCurve& curve, Vec2 X0_ortho,
                                                       TransportBackend backend = TransportBackend::Auto);
/// Exact transport along a geodesic polygonal: the angle is constant on each
/// arc and jumps by the signed turning angle at each corner.
AngleSeries transport_polygonal(const GeodesicPolygonal& poly, Vec2 X0_ortho);

/// Replace every jump by its representative in (-pi, pi] modulo 2 pi; drops
/// empty jumps; grid values are untouched (cos/sin stable bitwise).
AngleSeries optimal_lift(const AngleSeries& series);

enum class CurvatureBackend { ThetaDot, ChartFormula, SphereFormula };
Eigen::VectorXd geodesic_curvature(const SampledCurve& curve, CurvatureBackend backend);

/// Max residual of alpha' beta - alpha beta' = cos(theta) phi' over the nodes,
/// with the derivatives taken by finite differences (sphere chart only).
double transport_identity_residual(const TransportState& state, const SampledCurve& curve);

/// Max |alpha^2 + beta^2 - 1| over the nodes.
double transport_norm_drift(const TransportState& state);

}  // namespace tcurve
