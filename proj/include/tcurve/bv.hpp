#pragma once

#include "tcurve/curve.hpp"
#include "tcurve/transport.hpp"

#include <vector>

namespace tcurve {

/// Totals of the absolutely continuous, jump, and Cantor variation components.
struct BVBreakdown {
  double ac = 0.0, jump = 0.0, cantor = 0.0;
  double total() const { return ac + jump + cantor; }
};

/// A structurally specified one-dimensional BV function: grid samples, explicit
/// jump records, optional analytic derivative samples on smooth runs, and a
/// declared singular (Cantor) channel. The Cantor mass is never inferred by
/// numerical differentiation; it is carried here and cross-checked.
struct BVSeries {
  Eigen::VectorXd s;
  Eigen::MatrixXd values;  // one column per node
  struct Jump {
    double s = 0.0;
    Eigen::VectorXd left, right;
  };
  std::vector<Jump> jumps;
  Eigen::MatrixXd deriv;   // empty, or one column per node on smooth runs
  std::vector<std::pair<int, int>> smooth_runs;  // node ranges with a defined derivative
  double singular_mass = 0.0;

  int dim() const { return static_cast<int>(values.rows()); }
  int nodes() const { return static_cast<int>(values.cols()); }
};

enum class SeriesMetric { Euclidean, GreatCircle };
enum class VariationBackend { Structural, PartitionSum };

/// Essential variation of the series under the chosen metric.
/// Structural: quadrature of |derivative| on smooth runs + metric jump distances
/// + the declared singular mass. PartitionSum: sum of metric distances over the
/// grid (with one-sided jump values as extra partition points).
double essential_variation(const BVSeries& series, SeriesMetric metric,
                           VariationBackend backend = VariationBackend::Structural);

/// AC/jump/Cantor split, cross-checked against the partition-sum total.
/// Throws ComputationError when |total - (ac+jump+cantor)| > max(1e-6, 1e-3 total).
BVBreakdown decompose(const BVSeries& series, SeriesMetric metric = SeriesMetric::GreatCircle);

/// Tantrix of the curve as a sphere-valued (or circle-valued) BV series with
/// the curve's structural tags.
BVSeries tantrix_series(const SampledCurve& curve);

/// Scalar series view of a transport angle.
BVSeries angle_series_view(const AngleSeries& series);

/// The energy functional: integral of |tau' . u| ds, plus the Cantor channel,
/// plus the sum of geodesic jump distances of the tantrix.
BVBreakdown energy_functional(const SampledCurve& curve);

}  // namespace tcurve
