#include "radmax/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace radmax {

void apply_thread_cap_from_env() {
  const char* env = std::getenv("RADMAX_THREADS");
  if (env == nullptr) return;
  try {
    const int cap = std::stoi(env);
    if (cap > 0 && cap < omp_get_max_threads()) omp_set_num_threads(cap);
  } catch (const std::exception&) {
    // Malformed value: leave the OpenMP default in place.
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace radmax
