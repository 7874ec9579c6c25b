#pragma once

// Named verification checks grouped by geometry.  Each check reports a
// pass flag and a one-line detail; the command-line tool and the
// acceptance harness print them.

#include <cstdint>
#include <string>
#include <vector>

namespace contact_spinor {

enum class Suite { Conformal3D, G2, Leg };

std::string to_string(Suite s);

struct SuiteOptions {
  double tol = 1e-6;
  std::uint64_t seed = 20240611;
  int points = 20;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> run_suite(Suite s, const SuiteOptions& opt = {});

}  // namespace contact_spinor
