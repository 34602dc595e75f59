#include "tcurve/jobspec.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"total intrinsic curvature toolkit: parallel transport, BV energy, "
               "Gauss-Bonnet, and development experiments for curves on surfaces"};
  std::string spec_path;
  std::string out_dir, format;
  int nodes = 0, rounds = 0;
  app.add_option("--spec", spec_path, "JSON job document")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default ./out)");
  app.add_option("--nodes", nodes, "curve node count override");
  app.add_option("--rounds", rounds, "refinement round override");
  app.add_option("--format", format, "output format: csv, json, both");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // flag problems are validation failures; --help is not
  }

  try {
    std::ifstream in(spec_path);
    nlohmann::json document = nlohmann::json::parse(in);
    tcurve::JobOverrides overrides;
    if (!out_dir.empty()) overrides.out_dir = out_dir;
    if (!format.empty()) overrides.format = format;
    if (nodes > 0) overrides.nodes = nodes;
    if (rounds > 0) overrides.rounds = rounds;
    tcurve::JobSpec job = tcurve::parse_spec(document, overrides);
    return tcurve::run(job, std::cout);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 1;
  } catch (const tcurve::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tcurve::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
