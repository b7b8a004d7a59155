#pragma once

#include <cmath>
#include <limits>

namespace radmax {

/// A nonnegative quantity stored as its natural logarithm. Zero is -inf.
/// Arithmetic never exponentiates, so values like |B_1| in R^100000 survive.
class LogMeasure {
 public:
  constexpr LogMeasure() = default;

  static constexpr LogMeasure from_log(double log_value) { return LogMeasure(log_value); }
  static LogMeasure from_value(double value) { return LogMeasure(std::log(value)); }
  static constexpr LogMeasure zero() {
    return LogMeasure(-std::numeric_limits<double>::infinity());
  }
  static constexpr LogMeasure one() { return LogMeasure(0.0); }

  constexpr double log() const { return log_value_; }
  double value() const { return std::exp(log_value_); }
  constexpr bool is_zero() const {
    return log_value_ == -std::numeric_limits<double>::infinity();
  }

  friend constexpr LogMeasure operator*(LogMeasure a, LogMeasure b) {
    return LogMeasure(a.log_value_ + b.log_value_);
  }
  friend constexpr LogMeasure operator/(LogMeasure a, LogMeasure b) {
    return LogMeasure(a.log_value_ - b.log_value_);
  }
  friend LogMeasure operator+(LogMeasure a, LogMeasure b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::fmax(a.log_value_, b.log_value_);
    const double lo = std::fmin(a.log_value_, b.log_value_);
    return LogMeasure(hi + std::log1p(std::exp(lo - hi)));
  }
  LogMeasure pow(double exponent) const { return LogMeasure(log_value_ * exponent); }

  friend constexpr bool operator<(LogMeasure a, LogMeasure b) {
    return a.log_value_ < b.log_value_;
  }
  friend constexpr bool operator<=(LogMeasure a, LogMeasure b) {
    return a.log_value_ <= b.log_value_;
  }

 private:
  constexpr explicit LogMeasure(double v) : log_value_(v) {}
  double log_value_ = -std::numeric_limits<double>::infinity();
};

}  // namespace radmax
