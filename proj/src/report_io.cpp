#include "tcurve/report_io.hpp"

#include <cstdio>

namespace tcurve {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_refinement_csv(std::ostream& os, const RefinementReport& report) {
  os << "n,mesh,modulus,rotation,euclid_rotation,length\n";
  for (const auto& row : report.rows)
    os << row.vertices << ',' << format_double(row.mesh) << ',' << format_double(row.modulus)
       << ',' << format_double(row.rotation) << ',' << format_double(row.euclid_rotation) << ','
       << format_double(row.length) << '\n';
}

void write_plot_csv(std::ostream& os, const RefinementReport& report) {
  os << "modulus,rotation\n";
  for (const auto& row : report.rows)
    os << format_double(row.modulus) << ',' << format_double(row.rotation) << '\n';
}

void write_angle_csv(std::ostream& os, const AngleSeries& series) {
  os << "s,theta,is_jump,theta_minus,theta_plus\n";
  size_t next = 0;
  for (Eigen::Index i = 0; i < series.s.size(); ++i) {
    while (next < series.jumps.size() && series.jumps[next].s <= series.s[i] - 1e-14) {
      const auto& j = series.jumps[next];
      os << format_double(j.s) << ",," << 1 << ',' << format_double(j.theta_minus) << ','
         << format_double(j.theta_plus) << '\n';
      ++next;
    }
    os << format_double(series.s[i]) << ',' << format_double(series.value_at(int(i))) << ",0,,\n";
  }
  for (; next < series.jumps.size(); ++next) {
    const auto& j = series.jumps[next];
    os << format_double(j.s) << ",," << 1 << ',' << format_double(j.theta_minus) << ','
       << format_double(j.theta_plus) << '\n';
  }
}

void write_breakdown_csv(std::ostream& os, const BVBreakdown& b) {
  os << "ac,jump,cantor,total\n";
  os << format_double(b.ac) << ',' << format_double(b.jump) << ',' << format_double(b.cantor)
     << ',' << format_double(b.total()) << '\n';
}

void write_gauss_bonnet_csv(std::ostream& os, const GaussBonnetReport& report) {
  os << "area_integral,theta_span,alpha,residual\n";
  os << format_double(report.area_integral) << ',' << format_double(report.theta_span) << ','
     << format_double(report.alpha) << ',' << format_double(report.residual) << '\n';
}

void write_planar_curve_csv(std::ostream& os, const SampledCurve& curve) {
  os << "s,x,y,tx,ty\n";
  for (int i = 0; i < curve.nodes(); ++i)
    os << format_double(curve.s[i]) << ',' << format_double(curve.point[size_t(i)].x()) << ','
       << format_double(curve.point[size_t(i)].y()) << ','
       << format_double(curve.velocity[size_t(i)].x()) << ','
       << format_double(curve.velocity[size_t(i)].y()) << '\n';
}

nlohmann::json to_json(const BVBreakdown& b) {
  return {{"ac", b.ac}, {"jump", b.jump}, {"cantor", b.cantor}, {"total", b.total()}};
}

nlohmann::json to_json(const RefinementReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"n", row.vertices},
                    {"mesh", row.mesh},
                    {"modulus", row.modulus},
                    {"rotation", row.rotation},
                    {"euclid_rotation", row.euclid_rotation},
                    {"length", row.length}});
  return {{"rows", rows}, {"modulus_subsamples", report.modulus_subsamples}};
}

nlohmann::json to_json(const TCReport& report) {
  return {{"refinement", to_json(report.refinement)},
          {"estimate", report.estimate},
          {"fitted_order", report.fitted_order},
          {"converged", report.converged},
          {"oscillating", report.oscillating},
          {"low_confidence", report.low_confidence},
          {"energy", to_json(report.energy)},
          {"equality_gap", report.equality_gap},
          {"seed", report.seed}};
}

nlohmann::json to_json(const GaussBonnetReport& report) {
  return {{"area_integral", report.area_integral},
          {"theta_span", report.theta_span},
          {"alpha", report.alpha},
          {"residual", report.residual},
          {"grid", report.grid},
          {"boundary_cells", report.boundary_cells}};
}

}  // namespace tcurve
