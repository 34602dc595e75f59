#include "tcurve/jobspec.hpp"

#include "tcurve/expression.hpp"
#include "tcurve/report_io.hpp"
#include "tcurve/verify.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace tcurve {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ValidationError("spec field '" + path + "': " + what);
}

double require_number(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) schema_error(path + "." + key, "missing");
  if (!j[key].is_number()) schema_error(path + "." + key, "must be a number");
  return j[key].get<double>();
}

double angle_field(const json& j, const std::string& path, const std::string& key) {
  double v = require_number(j, path, key);
  if (std::abs(v) > 2.0 * M_PI)
    schema_error(path + "." + key,
                 "angles are radians only; " + std::to_string(v) + " looks like degrees");
  return v;
}

ChartPtr parse_surface(const json& j) {
  if (!j.contains("type") || !j["type"].is_string()) schema_error("surface.type", "missing");
  std::string type = j["type"].get<std::string>();
  if (type == "sphere") return sphere_chart();
  if (type == "flat-polar") return flat_polar_chart();
  if (type == "custom-polar") {
    if (!j.contains("g") || !j["g"].is_string())
      schema_error("surface.g", "custom-polar needs a metric expression");
    double r_min = j.value("r_min", 1e-3);
    double r_max = j.value("r_max", 10.0);
    double c_bound = j.value("curvature_bound", 1.0);
    return custom_polar_chart(j["g"].get<std::string>(), r_min, r_max, c_bound);
  }
  throw ValidationError("unknown surface type '" + type +
                        "' (valid: sphere, flat-polar, custom-polar)");
}

CurvePiece parse_piece(const json& j, const ChartPtr& chart, size_t index);

SampledCurve parse_curve(const json& j, ChartPtr& chart, int nodes) {
  if (!j.contains("type") || !j["type"].is_string()) schema_error("curve.type", "missing");
  std::string type = j["type"].get<std::string>();

  if (type == "parallel") {
    double colat = angle_field(j, "curve", "colatitude");
    if (!chart) chart = sphere_chart();
    if (chart->name != "sphere")
      schema_error("curve", "a parallel lives on the sphere surface");
    return parallel_curve(colat, nodes);
  }
  if (type == "geodesic-polygon") {
    if (!chart) schema_error("surface", "geodesic-polygon needs a surface");
    if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].size() < 2)
      schema_error("curve.vertices", "need an array of at least two [r, phi] pairs");
    std::vector<ChartPoint> verts;
    for (const auto& v : j["vertices"]) {
      if (!v.is_array() || v.size() != 2) schema_error("curve.vertices", "entries are [r, phi]");
      verts.push_back({v[0].get<double>(), v[1].get<double>()});
      if (verts.back().r < chart->pole_guard)
        schema_error("curve.vertices", "vertex radius is under the chart pole guard");
    }
    bool closed = j.value("closed", true);
    return geodesic_polygon_curve(chart, verts, nodes, closed);
  }
  if (type == "chart-smooth") {
    if (!chart) schema_error("surface", "chart-smooth needs a surface");
    for (const char* key : {"r", "phi"})
      if (!j.contains(key) || !j[key].is_string())
        schema_error(std::string("curve.") + key, "missing expression in t");
    double t0 = require_number(j, "curve", "t0");
    double t1 = require_number(j, "curve", "t1");
    return chart_smooth_curve(chart, j["r"].get<std::string>(), j["phi"].get<std::string>(), t0,
                              t1, nodes);
  }
  if (type == "cantor-graph") {
    int depth = static_cast<int>(require_number(j, "curve", "depth"));
    chart = nullptr;  // planar job
    return cantor_graph_curve(depth, j.value("nodes", 0));
  }
  if (type == "piecewise") {
    if (!chart) schema_error("surface", "piecewise curves need a surface");
    if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
      schema_error("curve.pieces", "need a nonempty array of piece specs");
    std::vector<CurvePiece> pieces;
    for (size_t i = 0; i < j["pieces"].size(); ++i)
      pieces.push_back(parse_piece(j["pieces"][i], chart, i));
    return piecewise_curve(chart, std::move(pieces), nodes);
  }
  throw ValidationError("unknown curve type '" + type +
                        "' (valid: parallel, geodesic-polygon, chart-smooth, cantor-graph, "
                        "piecewise)");
}

CurvePiece parse_piece(const json& j, const ChartPtr& chart, size_t index) {
  std::string path = "curve.pieces[" + std::to_string(index) + "]";
  if (!j.contains("type") || !j["type"].is_string()) schema_error(path + ".type", "missing");
  std::string type = j["type"].get<std::string>();
  if (type == "geodesic") {
    if (!j.contains("start") || !j["start"].is_array() || j["start"].size() != 2)
      schema_error(path + ".start", "need [r, phi]");
    if (!j.contains("direction") || !j["direction"].is_array() || j["direction"].size() != 2)
      schema_error(path + ".direction", "need [dr, dphi]");
    double length = require_number(j, path, "length");
    ChartPoint start{j["start"][0].get<double>(), j["start"][1].get<double>()};
    Vec2 dir(j["direction"][0].get<double>(), j["direction"][1].get<double>());
    double g = metric_at(*chart, start);
    double norm = std::sqrt(dir.x() * dir.x() + g * dir.y() * dir.y());
    if (norm < 1e-12) schema_error(path + ".direction", "must be nonzero");
    GeodesicArc arc = geodesic_shoot(*chart, start, dir / norm, length);
    CurvePiece piece;
    piece.kind = PieceKind::Geodesic;
    piece.t0 = 0.0;
    piece.t1 = arc.length;
    auto state = arc.state;
    piece.pos = [state](double t) { Vec4 y = state(t); return Vec2(y[0], y[1]); };
    piece.vel = [state](double t) { Vec4 y = state(t); return Vec2(y[2], y[3]); };
    const SurfaceChart* ch = chart.get();
    piece.acc = [state, ch](double t) {
      Vec4 y = state(t);
      double g2 = ch->g(y[0], y[1]);
      double gr = ch->g_r(y[0], y[1]);
      double gphi = ch->g_phi(y[0], y[1]);
      double num = 2.0 * gr * y[2] * y[3] + gphi * y[3] * y[3];
      return Vec2(0.5 * gr * y[3] * y[3], num == 0.0 ? 0.0 : -num / (2.0 * g2));
    };
    return piece;
  }
  if (type == "chart-smooth") {
    for (const char* key : {"r", "phi"})
      if (!j.contains(key) || !j[key].is_string())
        schema_error(path + "." + key, "missing expression in t");
    double t0 = require_number(j, path, "t0");
    double t1 = require_number(j, path, "t1");
    Expression fr = Expression::parse(j["r"].get<std::string>(), {"t"});
    Expression fp = Expression::parse(j["phi"].get<std::string>(), {"t"});
    Expression dr = fr.derivative("t"), dp = fp.derivative("t");
    Expression ddr = dr.derivative("t"), ddp = dp.derivative("t");
    CurvePiece piece;
    piece.kind = PieceKind::Smooth;
    piece.t0 = t0;
    piece.t1 = t1;
    piece.pos = [fr, fp](double t) { return Vec2(fr(t), fp(t)); };
    piece.vel = [dr, dp](double t) { return Vec2(dr(t), dp(t)); };
    piece.acc = [ddr, ddp](double t) { return Vec2(ddr(t), ddp(t)); };
    return piece;
  }
  throw ValidationError("unknown piece type '" + type + "' (valid: geodesic, chart-smooth)");
}

Command parse_command(const std::string& name) {
  if (name == "tc") return Command::TC;
  if (name == "euclid-tc") return Command::EuclidTC;
  if (name == "transport") return Command::Transport;
  if (name == "energy") return Command::Energy;
  if (name == "gauss-bonnet") return Command::GaussBonnet;
  if (name == "develop") return Command::Develop;
  if (name == "verify") return Command::Verify;
  throw ValidationError("unknown command '" + name +
                        "' (valid: tc, euclid-tc, transport, energy, gauss-bonnet, develop, "
                        "verify)");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw ComputationError("cannot write " + path.string());
  os << text;
}

template <typename WriteFn>
void emit_csv(const JobSpec& job, const std::string& name, const WriteFn& fn) {
  if (job.format == "json") return;
  std::ofstream os(std::filesystem::path(job.out_dir) / name);
  fn(os);
}

void emit_json(const JobSpec& job, const std::string& name, const nlohmann::json& doc) {
  if (job.format == "csv") return;
  write_text(std::filesystem::path(job.out_dir) / name, doc.dump(2) + "\n");
}

}  // namespace

JobSpec parse_spec(const json& document, const JobOverrides& overrides) {
  if (!document.is_object()) throw ValidationError("the job spec must be a JSON object");
  JobSpec job;
  if (!document.contains("command") || !document["command"].is_string())
    schema_error("command", "missing");
  job.command = parse_command(document["command"].get<std::string>());

  const json params = document.value("params", json::object());
  job.nodes = overrides.nodes.value_or(params.value("nodes", 4096));
  if (job.nodes < 64) schema_error("params.nodes", "need at least 64 nodes");
  job.strategy.initial = params.value("initial_vertices", 4);
  job.strategy.rounds = overrides.rounds.value_or(params.value("rounds", 6));
  job.strategy.seed = params.value("seed", 0x5eedu);
  job.strategy.modulus_subsamples = params.value("modulus_subsamples", 64);
  if (params.contains("strategy")) {
    std::string name = params["strategy"].get<std::string>();
    if (name == "uniform-doubling")
      job.strategy.kind = RefinementStrategy::Kind::UniformDoubling;
    else if (name == "random-nested")
      job.strategy.kind = RefinementStrategy::Kind::RandomNested;
    else if (name == "modulus-targets")
      job.strategy.kind = RefinementStrategy::Kind::ModulusTargets;
    else
      schema_error("params.strategy", "valid: uniform-doubling, random-nested, modulus-targets");
  }
  if (params.contains("modulus_targets"))
    for (const auto& t : params["modulus_targets"])
      job.strategy.modulus_targets.push_back(t.get<double>());
  job.gb.grid = params.value("grid", 512);
  job.gb.max_depth = params.value("max_depth", 9);

  const json output = document.value("output", json::object());
  job.out_dir = overrides.out_dir.value_or(output.value("path", std::string("out")));
  job.format = overrides.format.value_or(output.value("format", std::string("csv")));
  if (job.format != "csv" && job.format != "json" && job.format != "both")
    schema_error("output.format", "valid: csv, json, both");

  if (job.command == Command::Verify) return job;

  if (document.contains("surface")) job.chart = parse_surface(document["surface"]);
  if (!document.contains("curve")) schema_error("curve", "missing");
  ChartPtr chart = job.chart;
  job.curve = parse_curve(document["curve"], chart, job.nodes);
  job.chart = chart;
  return job;
}

int run(const JobSpec& job, std::ostream& log) {
  std::filesystem::create_directories(job.out_dir);
  switch (job.command) {
    case Command::Verify: {
      auto results = run_verification_suite(&log);
      std::ostringstream table;
      print_check_table(table, results);
      write_text(std::filesystem::path(job.out_dir) / "verify.txt", table.str());
      log << table.str();
      for (const auto& r : results)
        if (!r.pass) return 1;
      return 0;
    }
    case Command::TC: {
      TCReport report = total_intrinsic_curvature(*job.curve, job.strategy);
      emit_csv(job, "refinement.csv", [&](std::ostream& os) { write_refinement_csv(os, report.refinement); });
      emit_csv(job, "plot.csv", [&](std::ostream& os) { write_plot_csv(os, report.refinement); });
      emit_json(job, "tc_report.json", to_json(report));
      log << "tc estimate: " << format_double(report.estimate)
          << "  (energy total " << format_double(report.energy.total())
          << ", gap " << format_double(report.equality_gap) << ")\n";
      if (report.oscillating) {
        log << "warning: refinement rows oscillate; estimate is the last row\n";
        return 3;
      }
      if (report.low_confidence)
        log << "warning: extrapolation was not trusted; estimate is the last row\n";
      return 0;
    }
    case Command::EuclidTC: {
      RefinementReport rows;
      double estimate = euclidean_total_curvature(*job.curve, &rows);
      emit_csv(job, "refinement.csv", [&](std::ostream& os) { write_refinement_csv(os, rows); });
      emit_json(job, "euclid_tc_report.json",
                {{"estimate", estimate}, {"refinement", to_json(rows)}});
      log << "euclidean tc estimate: " << format_double(estimate) << "\n";
      return 0;
    }
    case Command::Transport: {
      auto [state, series] = transport_along(*job.curve, job.curve->tau_ortho(0));
      AngleSeries lifted = optimal_lift(series);
      emit_csv(job, "theta.csv", [&](std::ostream& os) { write_angle_csv(os, lifted); });
      emit_json(job, "transport.json",
                {{"theta_end", lifted.value_at(job.curve->nodes() - 1)},
                 {"variation", lifted.var_total()},
                 {"norm_drift", transport_norm_drift(state)}});
      log << "transport: theta(L) = " << format_double(lifted.value_at(job.curve->nodes() - 1))
          << ", total variation " << format_double(lifted.var_total()) << "\n";
      return 0;
    }
    case Command::Energy: {
      BVBreakdown b = energy_functional(*job.curve);
      emit_csv(job, "energy.csv", [&](std::ostream& os) { write_breakdown_csv(os, b); });
      emit_json(job, "energy.json", to_json(b));
      log << "energy: ac " << format_double(b.ac) << ", jump " << format_double(b.jump)
          << ", cantor " << format_double(b.cantor) << ", total " << format_double(b.total())
          << "\n";
      return 0;
    }
    case Command::GaussBonnet: {
      GaussBonnetReport report = gauss_bonnet_check(*job.curve, job.gb);
      emit_csv(job, "gauss_bonnet.csv", [&](std::ostream& os) { write_gauss_bonnet_csv(os, report); });
      emit_json(job, "gauss_bonnet.json", to_json(report));
      log << "gauss-bonnet residual: " << format_double(report.residual) << "\n";
      return 0;
    }
    case Command::Develop: {
      SampledCurve dev = develop(*job.curve);
      emit_csv(job, "developed.csv", [&](std::ostream& os) { write_planar_curve_csv(os, dev); });
      double tc_dev = euclidean_total_curvature(dev);
      double kappa_integral = energy_functional(*job.curve).ac;
      emit_json(job, "develop_report.json",
                {{"length", dev.length},
                 {"tc_development", tc_dev},
                 {"curvature_integral", kappa_integral},
                 {"gap", std::abs(tc_dev - kappa_integral)}});
      log << "development: length " << format_double(dev.length) << ", tc "
          << format_double(tc_dev) << ", curvature integral " << format_double(kappa_integral)
          << "\n";
      return 0;
    }
  }
  return 2;
}

}  // namespace tcurve
