#pragma once

namespace radmax::special {

/// Thread-safe log Gamma(x) for x > 0.
double log_gamma(double x);

/// log B(a, b) for a, b > 0.
double log_beta(double a, double b);

/// log I_x(a, b), the log of the regularized incomplete beta function.
/// Evaluated by a modified-Lentz continued fraction with the prefactor kept in
/// log-space, so that I_x(a, b) ~ x^a with a in the hundreds of thousands does
/// not underflow. Returns -inf at x = 0 and 0 at x = 1.
double log_regularized_incomplete_beta(double a, double b, double x);

/// Same, with 1 - x supplied by the caller. Use when x is close to 1 and its
/// complement is known more accurately than 1 - x would be (e.g. cos^2 vs sin^2).
double log_regularized_incomplete_beta(double a, double b, double x, double one_minus_x);

}  // namespace radmax::special
