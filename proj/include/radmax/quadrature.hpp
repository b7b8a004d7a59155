#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "radmax/log_measure.hpp"

namespace radmax {

enum class SingularityMode {
  /// Integrate toward flagged endpoints in u = log|t - t_sing|.
  log_substitution,
  /// Plain adaptive Gauss-Kronrod on t.
  none,
};

struct QuadratureConfig {
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;
  SingularityMode singularity_mode = SingularityMode::log_substitution;
  /// Closest approach to a flagged endpoint, relative to the segment length.
  double singular_cutoff = 1e-15;
  std::uint64_t mc_samples = 200000;
  std::uint64_t seed = 20240917;

  /// Throws DomainError on a nonpositive tolerance or too few samples.
  void validate() const;
};

/// One piece of an integration domain. A flagged endpoint is approached by a
/// logarithmic change of variable and the sub-cutoff remainder is added in
/// closed form from the local power law; a local exponent <= -1 there means
/// the integral diverges.
struct Segment {
  double lo;
  double hi;
  bool lo_singular = false;
  bool hi_singular = false;
};

struct LogIntegral {
  LogMeasure value;
  /// Estimated absolute error relative to the value.
  double rel_error = 0.0;
  int subdivisions = 0;
  bool converged = true;
};

/// Integrates exp(log_f) over the union of `segments`. `log_f` may return -inf
/// (zero integrand). The integrand is exponentiated only after subtracting the
/// running maximum of log_f, so arbitrarily large or small magnitudes are fine.
/// Throws DivergenceError when an endpoint singularity is not integrable.
LogIntegral integrate_log(const std::function<double(double)>& log_f,
                          const std::vector<Segment>& segments, const QuadratureConfig& cfg);

}  // namespace radmax
