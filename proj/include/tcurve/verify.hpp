#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tcurve {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

/// The golden-value suite: every check the `verify` command reports, one row per
/// criterion. Progress lines go to `progress` as checks finish, when given.
std::vector<CheckResult> run_verification_suite(std::ostream* progress = nullptr);

void print_check_table(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace tcurve
