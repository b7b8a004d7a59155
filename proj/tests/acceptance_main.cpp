#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "radmax/acceptance.hpp"

// Usage: radmax_acceptance [id...]
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  int failed = 0;
  radmax::run_acceptance(ids, radmax::Exec::parallel, [&](const radmax::CriterionResult& r) {
    std::printf("%s\n", radmax::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
