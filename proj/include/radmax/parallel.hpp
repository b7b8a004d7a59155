#pragma once

#include <cstddef>

namespace radmax {

/// Selects the OpenMP kernel or the serial reference path. Both produce
/// identical results; the serial path is kept for testing and benchmarking.
enum class Exec { serial, parallel };

/// Caps OpenMP parallelism at the value of RADMAX_THREADS, when set.
void apply_thread_cap_from_env();

int max_threads();

}  // namespace radmax
