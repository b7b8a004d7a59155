#pragma once

#include <functional>
#include <string>
#include <vector>

#include "radmax/parallel.hpp"
#include "radmax/report.hpp"

namespace radmax {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;  ///< 0 means no runtime limit
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
};

/// The ten end-to-end checks, in order.
const std::vector<Criterion>& acceptance_criteria();

/// Runs one check. A check also fails when it overruns its runtime budget.
CriterionResult run_criterion(int id, Exec exec = Exec::parallel);

/// Runs the selected checks (all when `ids` is empty), calling `on_result`
/// after each one.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {}, Exec exec = Exec::parallel,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [3] title: detail (1.2 s)".
std::string format_result(const CriterionResult& r);

ExperimentReport acceptance_report(const std::vector<CriterionResult>& results);

}  // namespace radmax
