#pragma once

#include "tcurve/bv.hpp"
#include "tcurve/curve.hpp"
#include "tcurve/polygonal.hpp"
#include "tcurve/transport.hpp"

namespace tcurve {

struct TCReport {
  RefinementReport refinement;
  double estimate = 0.0;
  double fitted_order = 0.0;  // fitted convergence order of rotation vs modulus
  bool converged = false;     // rows settled to rounding level
  bool oscillating = false;   // rows oscillate above tolerance: estimate = last row
  bool low_confidence = false;  // unstable decay ratio or fitted order < 0.5: estimate = last row
  BVBreakdown energy;         // the energy functional of the tantrix
  double equality_gap = 0.0;  // |estimate - energy total|
  unsigned seed = 0;
};

/// Total intrinsic curvature via inscribed geodesic polygonals over a refinement
/// schedule, with a Richardson-style fit of rotation against modulus over the
/// last three rows (falls back to the last row when the fit is untrustworthy).
TCReport total_intrinsic_curvature(const SampledCurve& curve,
                                   const RefinementStrategy& strategy = {});

/// Euclidean total curvature: the limit of chord-polyline rotations under mesh
/// refinement. Rotations are nondecreasing toward the supremum, so the finest
/// row is returned (a certified lower estimate with one-sided error).
double euclidean_total_curvature(const SampledCurve& curve, RefinementReport* report = nullptr,
                                 const RefinementStrategy* strategy = nullptr);

struct GaussBonnetOptions {
  int grid = 512;      // base quadrature grid per axis
  int max_depth = 9;   // adaptive subdivision depth for boundary cells
};

struct GaussBonnetReport {
  double area_integral = 0.0;  // integral of K over the enclosed region
  double theta_span = 0.0;     // Theta(L) - Theta(0) through the signed interior jumps
  double alpha = 0.0;          // oriented junction angle from tau(L-) to tau(0+)
  double residual = 0.0;       // |area - (2 pi - theta_span - alpha)|
  int grid = 0;
  int boundary_cells = 0;
};

/// Generalized Gauss-Bonnet check for a simple closed positively oriented curve:
/// 2D quadrature of K sqrt(g) over the enclosed chart region (winding-number
/// point classification, adaptively refined at the boundary) against the angle
/// span of the parallel transport.
GaussBonnetReport gauss_bonnet_check(const SampledCurve& curve,
                                     const GaussBonnetOptions& opts = {});

/// Planar development of a curve on a flat chart: (r, phi) -> r (cos phi, sin phi).
/// Unit speed, geodesic curvature, and total curvature are preserved.
SampledCurve develop(const SampledCurve& curve);

struct EnvelopeParallel {
  ChartPtr chart;       // flat chart of the tangent-plane envelope
  SampledCurve curve;   // the parallel re-expressed as r = tan(colatitude)
};

/// Flat chart of the envelope of tangent planes along a sphere parallel, with
/// the parallel re-expressed in it. Rejects the great circle (degenerate case).
EnvelopeParallel envelope_chart_of_parallel(double colatitude, int n);

}  // namespace tcurve
