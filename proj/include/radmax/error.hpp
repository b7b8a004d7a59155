#pragma once

#include <stdexcept>
#include <string>

namespace radmax {

/// Precondition violated by the caller (bad dimension, radius, exponent...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A radial integral did not converge. `partial_log_estimate` holds the log of
/// the (finite) estimate reached before divergence was detected.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double partial_log_estimate)
      : std::runtime_error(what), partial_log_estimate_(partial_log_estimate) {}

  double partial_log_estimate() const noexcept { return partial_log_estimate_; }

 private:
  double partial_log_estimate_;
};

/// Malformed configuration or input document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace radmax
