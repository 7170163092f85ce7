#ifndef KACSIM_APP_ACCEPTANCE_HPP
#define KACSIM_APP_ACCEPTANCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kacsim::app {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  unsigned threads = 0;
  std::uint64_t master_seed = 1;
  /// Criterion ids to run; empty runs all ten.
  std::vector<int> only;
};

/// A criterion passes only if its check holds and it finished within budget.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [ 1] title: detail", with the timing appended when `with_timing`.
std::string format_result(const CriterionResult& r, bool with_timing);

} // namespace kacsim::app

#endif // KACSIM_APP_ACCEPTANCE_HPP
