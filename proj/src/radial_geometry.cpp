#include "radmax/radial_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "radmax/error.hpp"
#include "radmax/special.hpp"

namespace radmax {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Twice the area of a triangle with the given sides (Kahan's stable Heron).
double twice_triangle_area(double a, double b, double c) {
  if (a < b) std::swap(a, b);
  if (a < c) std::swap(a, c);
  if (b < c) std::swap(b, c);
  const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return p <= 0.0 ? 0.0 : 0.5 * std::sqrt(p);
}

// s^2 + t^2 - R^2, arranged to limit cancellation.
double cos_numerator(const BallSpec& spec, double t) {
  return (spec.s - spec.R) * (spec.s + spec.R) + t * t;
}

void add_interior(std::vector<double>& pts, double p, double lo, double hi) {
  if (p > lo && p < hi) pts.push_back(p);
}

// Sorted cuts turned into segments. Cuts closer than a few ulps are merged,
// keeping the singular one, so rounding in s - R or R - s never produces a
// sliver segment squeezed against a density singularity.
std::vector<Segment> segments_from_cuts(std::vector<double> cuts,
                                        const std::vector<double>& singular) {
  std::sort(cuts.begin(), cuts.end());
  auto is_singular = [&](double p) {
    return std::find(singular.begin(), singular.end(), p) != singular.end();
  };
  std::vector<double> merged;
  std::vector<bool> flag;
  for (double c : cuts) {
    const bool sing = is_singular(c);
    if (!merged.empty() &&
        c - merged.back() <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(c))) {
      if (sing && !flag.back()) merged.back() = c;
      flag.back() = flag.back() || sing;
      continue;
    }
    merged.push_back(c);
    flag.push_back(sing);
  }
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i)
    segs.push_back({merged[i], merged[i + 1], flag[i], flag[i + 1]});
  return segs;
}

// Segments covering [lo, hi] ∩ [clip_lo, clip_hi] split at the ball's
// structural points and the density's singular points and breakpoints.
std::vector<Segment> ball_segments(const RadialDensity& density, const BallSpec& spec,
                                   double clip_lo, double clip_hi) {
  const double lo = std::max(spec.support_lo(), clip_lo);
  const double hi = std::min(spec.support_hi(), clip_hi);
  if (!(hi > lo)) return {};

  std::vector<double> singular = {spec.support_lo(), spec.support_hi(), 0.0};
  if (spec.R > spec.s && spec.s > 0.0) singular.push_back(spec.R - spec.s);
  for (double p : density.singular_points()) singular.push_back(p);

  std::vector<double> cuts = {lo, hi};
  for (double p : singular) add_interior(cuts, p, lo, hi);
  add_interior(cuts, spec.T(), lo, hi);
  for (double p : density.breakpoints()) add_interior(cuts, p, lo, hi);
  return segments_from_cuts(std::move(cuts), singular);
}

LogMeasure checked(const LogIntegral& r, const char* what) {
  if (!r.converged && !(r.rel_error < 1e-3))
    throw DivergenceError(std::string(what) + ": adaptive refinement did not converge",
                          r.value.log());
  return r.value;
}

}  // namespace

BallSpec::BallSpec(int n_, double s_, double R_) : n(n_), s(s_), R(R_) {
  if (n < 2) throw DomainError("BallSpec: dimension must be at least 2");
  if (!(R > 0.0)) throw DomainError("BallSpec: radius must be positive");
  if (!(s >= 0.0)) throw DomainError("BallSpec: center distance must be nonnegative");
}

double BallSpec::T() const { return std::hypot(s, R); }

double BallSpec::support_lo() const { return std::max(0.0, s - R); }

LogMeasure log_sphere_surface(int n) {
  if (n < 1) throw DomainError("sphere dimension must be at least 1");
  const double half = 0.5 * n;
  return LogMeasure::from_log(std::log(2.0) + half * std::log(std::numbers::pi) -
                              special::log_gamma(half));
}

LogMeasure log_ball_volume(int n, double R) {
  return LogMeasure::from_log(log_sphere_surface(n).log() + n * std::log(R) - std::log(n));
}

double cap_angle_sin(const BallSpec& spec, double t) {
  if (spec.s == 0.0) throw DomainError("cap angle undefined for a centered ball");
  return twice_triangle_area(spec.s, t, spec.R) / (spec.s * t);
}

double cap_angle(const BallSpec& spec, double t) {
  if (spec.s == 0.0) throw DomainError("cap angle undefined for a centered ball; use the full sphere");
  if (t >= spec.s + spec.R) return 0.0;
  if (spec.R > spec.s && t <= spec.R - spec.s) return std::numbers::pi;
  const double c = std::clamp(cos_numerator(spec, t) / (2.0 * spec.s * t), -1.0, 1.0);
  const double sn = cap_angle_sin(spec, t);
  // atan2 agrees with arccos(c) but keeps full precision near 0 and pi.
  return std::atan2(sn, c);
}

double log_cap_fraction(const BallSpec& spec, double t) {
  if (!(t > 0.0)) return spec.s < spec.R ? 0.0 : kNegInf;
  if (spec.s == 0.0) return t < spec.R ? 0.0 : kNegInf;
  if (t >= spec.s + spec.R || t <= spec.s - spec.R) return kNegInf;
  if (spec.R > spec.s && t <= spec.R - spec.s) return 0.0;

  const double sin_a = std::min(1.0, cap_angle_sin(spec, t));
  const double cos_a = std::clamp(cos_numerator(spec, t) / (2.0 * spec.s * t), -1.0, 1.0);
  const double a = 0.5 * (spec.n - 1);
  // Integral of sin^(n-2) over [0, alpha] equals B(a, 1/2) I_x(a, 1/2) / 2 with
  // x = sin^2(alpha) for alpha <= pi/2; the other half follows by symmetry.
  const double log_i = special::log_regularized_incomplete_beta(a, 0.5, sin_a * sin_a, cos_a * cos_a);
  if (cos_a >= 0.0) return std::log(0.5) + log_i;
  return std::log1p(-0.5 * std::exp(log_i));
}

LogMeasure cap_measure(const BallSpec& spec, double t) {
  return log_sphere_surface(spec.n) * LogMeasure::from_log(log_cap_fraction(spec, t));
}

double log_kernel_phi(const BallSpec& spec, double t) {
  if (t < spec.support_lo() || t > spec.support_hi() || !(t > 0.0)) return kNegInf;
  const double frac = log_cap_fraction(spec, t);
  if (frac == kNegInf) return kNegInf;
  return std::log(static_cast<double>(spec.n)) - spec.n * std::log(spec.R) + frac +
         (spec.n - 1) * std::log(t);
}

double kernel_phi(const BallSpec& spec, double t) { return std::exp(log_kernel_phi(spec, t)); }

LogMeasure ball_measure_between(const RadialDensity& density, const BallSpec& spec, double t_lo,
                                double t_hi, const QuadratureConfig& q) {
  const auto segs = ball_segments(density, spec, t_lo, t_hi);
  if (segs.empty()) return LogMeasure::zero();
  const int n = spec.n;
  auto log_f = [&](double t) {
    if (!(t > 0.0)) return kNegInf;
    const double frac = log_cap_fraction(spec, t);
    if (frac == kNegInf) return kNegInf;
    return density.log_eval(t) + frac + (n - 1) * std::log(t);
  };
  return log_sphere_surface(n) * checked(integrate_log(log_f, segs, q), "ball_measure");
}

LogMeasure ball_measure(const RadialDensity& density, const BallSpec& spec,
                        const QuadratureConfig& q) {
  if (spec.n < density.integrability_floor())
    throw DivergenceError("density is not locally integrable in dimension " +
                              std::to_string(spec.n),
                          std::numeric_limits<double>::infinity());
  return ball_measure_between(density, spec, 0.0, spec.support_hi(), q);
}

double ball_average(const RadialDensity& density, const BallSpec& spec,
                    const QuadratureConfig& q) {
  return (ball_measure(density, spec, q) / log_ball_volume(spec.n, spec.R)).value();
}

LogMeasure radial_moment(const RadialDensity& density, int n, double a, double b,
                         const QuadratureConfig& q) {
  if (!(b > a) || a < 0.0) return LogMeasure::zero();
  std::vector<double> singular = {0.0};
  for (double p : density.singular_points()) singular.push_back(p);
  std::vector<double> cuts = {a, b};
  for (double p : singular) add_interior(cuts, p, a, b);
  for (double p : density.breakpoints()) add_interior(cuts, p, a, b);
  const auto segs = segments_from_cuts(std::move(cuts), singular);
  auto log_f = [&](double t) {
    if (!(t > 0.0)) return kNegInf;
    return density.log_eval(t) + (n - 1) * std::log(t);
  };
  return checked(integrate_log(log_f, segs, q), "radial_moment");
}

MonteCarloEstimate mc_ball_measure(const RadialDensity& density, const BallSpec& spec,
                                   const QuadratureConfig& q) {
  if (spec.n > 10) throw DomainError("Monte Carlo oracle is limited to n <= 10");
  q.validate();
  std::mt19937_64 rng(q.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = spec.n;
  std::vector<double> x(n);
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t k = 0; k < q.mc_samples; ++k) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = gauss(rng);
      norm2 += x[i] * x[i];
    }
    const double radius = spec.R * std::pow(unif(rng), 1.0 / n) / std::sqrt(norm2);
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double xi = x[i] * radius + (i == 0 ? spec.s : 0.0);
      r2 += xi * xi;
    }
    const double w = density.eval(std::sqrt(r2));
    const double delta = w - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (w - mean);
  }
  const double samples = static_cast<double>(q.mc_samples);
  const double volume = log_ball_volume(n, spec.R).value();
  return {volume * mean, volume * std::sqrt(m2 / (samples - 1.0) / samples)};
}

}  // namespace radmax
