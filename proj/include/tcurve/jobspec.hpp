#pragma once

#include "tcurve/analysis.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace tcurve {

enum class Command { TC, EuclidTC, Transport, Energy, GaussBonnet, Develop, Verify };

/// A fully validated job: surface and curve descriptors resolved to objects,
/// command and parameters with defaults filled in.
struct JobSpec {
  Command command = Command::TC;
  ChartPtr chart;                      // null for planar jobs
  std::optional<SampledCurve> curve;   // absent only for `verify`
  int nodes = 4096;
  RefinementStrategy strategy;         // uniform doubling x6 by default
  GaussBonnetOptions gb;
  std::string out_dir = "out";
  std::string format = "csv";          // csv | json | both
};

struct JobOverrides {
  std::optional<int> nodes;
  std::optional<int> rounds;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

/// Parse and validate a JSON job document. Unknown surface/curve types list the
/// valid ones; schema violations name the offending field.
JobSpec parse_spec(const nlohmann::json& document, const JobOverrides& overrides = {});

/// Run the job and write its artifacts under the output directory.
/// Returns the process exit code (0 success; verify: 0 iff all checks pass).
int run(const JobSpec& job, std::ostream& log);

}  // namespace tcurve
