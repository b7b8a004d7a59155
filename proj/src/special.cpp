#include "radmax/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

#include "radmax/error.hpp"

namespace radmax::special {

namespace {

constexpr int kMaxContinuedFractionTerms = 200000;
constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;

// Continued fraction for I_x(a, b) / (x^a (1-x)^b / (a B(a, b))), valid and
// fast for x < (a + 1) / (a + b + 2). Modified Lentz.
double incomplete_beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw DomainError("incomplete beta continued fraction did not converge");
}

double log_ibeta_lower(double a, double b, double x, double y) {
  const double log_prefactor =
      a * std::log(x) + b * std::log(y) - log_beta(a, b) - std::log(a);
  return log_prefactor + std::log(incomplete_beta_cf(a, b, x));
}

}  // namespace

double log_gamma(double x) { return boost::math::lgamma(x); }

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: arguments must be positive");
  // Gamma(a)/Gamma(a+b) via the delta ratio avoids cancelling two huge lgammas.
  if (a >= b) return boost::math::lgamma(b) + std::log(boost::math::tgamma_delta_ratio(a, b));
  return boost::math::lgamma(a) + std::log(boost::math::tgamma_delta_ratio(b, a));
}

double log_regularized_incomplete_beta(double a, double b, double x) {
  return log_regularized_incomplete_beta(a, b, x, 1.0 - x);
}

double log_regularized_incomplete_beta(double a, double b, double x, double one_minus_x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta: a, b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta: x must lie in [0, 1]");
  if (x == 0.0 || one_minus_x >= 1.0) return -std::numeric_limits<double>::infinity();
  if (x == 1.0 || one_minus_x <= 0.0) return 0.0;
  if (x < (a + 1.0) / (a + b + 2.0)) return log_ibeta_lower(a, b, x, one_minus_x);
  // I_x(a, b) = 1 - I_{1-x}(b, a); here the complement is the small side.
  const double log_complement = log_ibeta_lower(b, a, one_minus_x, x);
  return std::log1p(-std::exp(log_complement));
}

}  // namespace radmax::special
