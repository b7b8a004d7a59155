#pragma once

#include <cmath>
#include <exception>
#include <mutex>
#include <utility>

namespace radmax::detail {

/// Golden-section search for a maximum of f on [a, b]. Returns the best
/// (x, f(x)) pair seen, which is all a lower-bound certificate needs.
template <class F>
std::pair<double, double> golden_maximize(F&& f, double a, double b, int iterations) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  std::pair<double, double> best = f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
  for (int i = 0; i < iterations; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
      if (f1 > best.second) best = {x1, f1};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
      if (f2 > best.second) best = {x2, f2};
    }
  }
  return best;
}

/// Collects the first exception thrown inside an OpenMP loop body so it can
/// be rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class Body>
  void run(Body&& body) {
    try {
      body();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace radmax::detail
