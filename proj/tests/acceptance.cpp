// Acceptance suite: runs every golden check once and asserts each row, printing
// one PASS/FAIL line per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcurve/verify.hpp"

#include <iostream>

TEST_CASE("acceptance criteria") {
  auto results = tcurve::run_verification_suite(&std::cout);
  REQUIRE_FALSE(results.empty());
  for (const auto& r : results) {
    INFO(r.name, ": measured ", r.measured, " vs bound ", r.bound, " ", r.detail);
    CHECK(r.pass);
  }
}
