#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace regada {

struct GradCheckSuiteEntry {
  std::string name;
  double max_rel_err = 0.0;
  bool passed = false;
};

struct GradCheckSuiteResult {
  std::vector<GradCheckSuiteEntry> entries;
  bool all_passed = true;
};

// Finite-difference verification of every differentiable op and of the full
// weighted training objective through both encoders, `points` random points
// each (h = 1e-5, tolerance 1e-4 relative). Prints one line per entry.
GradCheckSuiteResult run_gradcheck_suite(std::ostream& log, std::size_t points = 20);

}  // namespace regada
