// Runs the acceptance criteria and prints one line per criterion.
// Optional arguments restrict the run to the given criterion ids.

#include "kacsim/app/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv)
{
  kacsim::app::AcceptanceOptions options;
  for (int k = 1; k < argc; ++k) {
    options.only.push_back(std::stoi(argv[k]));
  }
  int failed = 0;
  kacsim::app::run_acceptance(options, [&](const kacsim::app::CriterionResult& r) {
    std::cout << kacsim::app::format_result(r, true) << std::endl;
    failed += r.passed ? 0 : 1;
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
