#pragma once

#include <utility>

#include "radmax/density.hpp"
#include "radmax/log_measure.hpp"
#include "radmax/quadrature.hpp"

namespace radmax {

/// A Euclidean ball in R^n up to rotation: center at distance s from the
/// origin, radius R.
struct BallSpec {
  int n;
  double s;
  double R;

  BallSpec(int n, double s, double R);

  /// Distance from the origin to the maximal circle, sqrt(s^2 + R^2).
  double T() const;
  double support_lo() const;
  double support_hi() const { return s + R; }
};

/// log of the surface measure of the unit sphere S^(n-1).
LogMeasure log_sphere_surface(int n);

/// log of the Lebesgue volume of a radius-R ball in R^n.
LogMeasure log_ball_volume(int n, double R);

/// Angle at the origin between the center direction and the points where the
/// sphere |x| = t meets the ball boundary. Requires s > 0.
double cap_angle(const BallSpec& spec, double t);

/// sin of cap_angle, computed from the triangle area so it stays accurate for
/// small angles.
double cap_angle_sin(const BallSpec& spec, double t);

/// Measure of {theta in S^(n-1) : t theta in B(z, R)}.
LogMeasure cap_measure(const BallSpec& spec, double t);

/// Same as cap_measure divided by the full sphere measure, in log form.
double log_cap_fraction(const BallSpec& spec, double t);

/// Radial law of a uniform point in the ball:
/// phi_n(t) = n A_n(t) t^(n-1) / (omega_{n-1} R^n) on [(s-R)_+, s+R].
double kernel_phi(const BallSpec& spec, double t);
double log_kernel_phi(const BallSpec& spec, double t);

/// mu(B(z, R)) for |z| = s.
LogMeasure ball_measure(const RadialDensity& density, const BallSpec& spec,
                        const QuadratureConfig& q = {});

/// Integral of w0(|x|) over the part of the ball with t_lo <= |x| <= t_hi.
LogMeasure ball_measure_between(const RadialDensity& density, const BallSpec& spec,
                                double t_lo, double t_hi, const QuadratureConfig& q = {});

/// Average of w0(|x|) over the ball, equal to the integral of w0 against phi_n.
double ball_average(const RadialDensity& density, const BallSpec& spec,
                    const QuadratureConfig& q = {});

/// log of the integral of w0(t) t^(n-1) over [a, b] (no sphere factor).
LogMeasure radial_moment(const RadialDensity& density, int n, double a, double b,
                         const QuadratureConfig& q = {});

struct MonteCarloEstimate {
  double estimate;
  double std_error;
};

/// Unbiased Monte Carlo estimate of mu(B(z, R)) from uniform points in the
/// ball. Restricted to 2 <= n <= 10; deterministic in q.seed.
MonteCarloEstimate mc_ball_measure(const RadialDensity& density, const BallSpec& spec,
                                   const QuadratureConfig& q = {});

}  // namespace radmax
