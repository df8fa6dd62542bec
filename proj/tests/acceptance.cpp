#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "closurekit/theorems.hpp"

// Prints one line per acceptance criterion; exits nonzero if any fails.
// Optional arguments name the criteria to run (default: all).
int main(int argc, char** argv) {
  using namespace closurekit;
  SweepOptions opt;
  opt.jobs = hardware_jobs();
  std::vector<std::string> ids(argv + 1, argv + argc);
  bool ok = true;
  for (const std::string& id : ids.empty() ? criterion_ids() : ids) {
    CriterionResult r = run_criteria(opt, {id}).front();
    std::cout << format_result_line(r) << '\n';
    for (const std::string& w : r.witnesses) std::cout << "  violation: " << w << '\n';
    std::cout.flush();
    ok = ok && r.passed;
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
