#pragma once

#include "tcurve/analysis.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace tcurve {

// Deterministic shortest-roundtrip formatting for every number we emit.
std::string format_double(double v);

void write_refinement_csv(std::ostream& os, const RefinementReport& report);
/// (modulus, rotation) pairs for convergence plots.
void write_plot_csv(std::ostream& os, const RefinementReport& report);
/// Columns: s, theta, is_jump, theta_minus, theta_plus.
void write_angle_csv(std::ostream& os, const AngleSeries& series);
void write_breakdown_csv(std::ostream& os, const BVBreakdown& b);
void write_gauss_bonnet_csv(std::ostream& os, const GaussBonnetReport& report);
/// Developed planar curve: s, x, y, tx, ty.
void write_planar_curve_csv(std::ostream& os, const SampledCurve& curve);

nlohmann::json to_json(const BVBreakdown& b);
nlohmann::json to_json(const RefinementReport& report);
nlohmann::json to_json(const TCReport& report);
nlohmann::json to_json(const GaussBonnetReport& report);

}  // namespace tcurve
