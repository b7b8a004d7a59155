#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radmax/density.hpp"
#include "radmax/parallel.hpp"
#include "radmax/quadrature.hpp"
#include "radmax/radial_geometry.hpp"
#include "radmax/report.hpp"
#include "radmax/weights.hpp"

namespace radmax {

/// Approximation-of-identity data for the radial kernel phi_n of one ball.
struct KernelCertificate {
  double min_phi = 0.0;     ///< smallest kernel value on the mesh
  double mass_error = 0.0;  ///< |int phi_n - 1|
  double tail_below = 0.0;  ///< mass on [0, T - eps]
  double tail_above = 0.0;  ///< mass on [T + eps, s + R]
  /// phi_n nonincreasing on [T, s + R] at the mesh points.
  bool decreasing_beyond_T = true;
  /// Largest relative violation of phi~ <= phi <= phi~ / cos(alpha) where
  /// alpha < pi/2 (<= 0 means the double estimate holds everywhere).
  double double_estimate_violation = 0.0;
  int double_estimate_points = 0;

  double tail() const { return tail_below + tail_above; }
};

KernelCertificate approx_identity_certificate(const BallSpec& spec, double eps,
                                              const QuadratureConfig& q = {}, int mesh = 1000);

/// Geometric schedule 10 * 4^k, capped at `cap` (the cap itself is included).
std::vector<int> geometric_schedule(int first = 10, int factor = 4, int cap = 2000);

struct LimitExperiment {
  RadialDensity density;
  std::vector<std::pair<double, double>> balls;  ///< (s, R)
  std::vector<int> dimensions = geometric_schedule();
  /// Tolerance for |Phi_n - w0(T)| at each dimension; only the last is asserted.
  std::vector<double> tolerances;
  QuadratureConfig q;

  /// Throws DomainError when some T sits on a discontinuity or singularity.
  void validate() const;
};

struct LimitRow {
  double s = 0.0, R = 0.0, T = 0.0;
  int n = 0;
  double average = 0.0;  ///< Phi_n^{(s,R)} w0
  double target = 0.0;   ///< w0(T)
  double error = 0.0;
};

struct LimitTable {
  std::vector<LimitRow> rows;
  bool passed = true;
  std::vector<std::string> failures;
  ExperimentReport report{"limit", {"s", "R", "T", "n", "average", "target", "error"}};
};

/// Phi_n vs n for every ball; passes when, per ball, the final error is
/// below the last tolerance and below the first error.
LimitTable limit_table(const LimitExperiment& exp, Exec exec = Exec::parallel);

enum class GrowthModel { power, exponential };

/// OLS fit of log y against log x (power, y ~ c x^gamma) or against x
/// (exponential, y ~ c a^x).
struct GrowthFit {
  GrowthModel model = GrowthModel::power;
  std::vector<double> x, y;
  double slope = 0.0;  ///< gamma, or log a
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double band_lo = 0.0, band_hi = 0.0;  ///< 95% band for the slope
  double r_squared = 0.0;
  double residual_rms = 0.0;

  /// a = e^slope for the exponential model, gamma for the power model.
  double rate() const;
  /// The exponent is only claimed when the fit explains the data.
  bool asserted(double min_r_squared = 0.98) const { return r_squared >= min_r_squared; }
};

GrowthFit fit_growth(const std::vector<double>& x, const std::vector<double>& y, GrowthModel model);

/// Points with x at or above `min_x`, or the upper half of the list when
/// `min_x` is unset.
std::pair<std::vector<double>, std::vector<double>> fit_window(const std::vector<double>& x,
                                                               const std::vector<double>& y,
                                                               std::optional<double> min_x);

struct ShellCounterexample {
  double alpha = 0.5;
  std::vector<int> dimensions;
  std::vector<double> centered_ratio;  ///< mu(B_1) / |B_1|
  std::vector<double> shifted_ratio;   ///< mu(B(z, 1)) / |B(z, 1)|, |z| = 1
  std::vector<double> delta_bound;     ///< delta_lower_bound over the level mesh
  std::vector<bool> delta_monotone;
  double limit_target = 0.0;           ///< (sqrt 2 - 1)^(-alpha)
  double limit_distance = 0.0;         ///< at the last dimension
  GrowthFit centered_fit;
  GrowthFit delta_fit;
  std::vector<DoublingProfile> doubling;  ///< filled when a sweep grid is given
  ExperimentReport report{"counterexample",
                          {"n", "centered_ratio", "shifted_ratio", "delta_bound", "delta_monotone"}};
};

struct ShellOptions {
  std::vector<int> dimensions{10, 50, 100, 200, 500, 1000, 2000};
  std::optional<double> fit_min_n;
  std::vector<double> level_mesh{0.9, 0.95, 1.0, 1.05, 1.1};
  std::optional<SweepGrid> doubling_grid;
  QuadratureConfig q;
};

ShellCounterexample shell_counterexample(double alpha, const ShellOptions& opt = {},
                                         Exec exec = Exec::parallel);

struct PowerFamilyResult {
  double alpha = 0.7;
  std::vector<int> dimensions;
  std::vector<double> delta_bound;
  std::vector<bool> delta_monotone;
  GrowthFit fit;  ///< exponential
  ExperimentReport report{"power-family", {"n", "delta_bound", "log_delta_bound", "delta_monotone"}};
};

struct PowerFamilyOptions {
  std::vector<int> dimensions{10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120};
  std::optional<double> fit_min_n;
  std::vector<double> level_mesh{0.5, 1.0, 2.0};
  QuadratureConfig q;
};

PowerFamilyResult power_family_experiment(double alpha, const PowerFamilyOptions& opt = {},
                                          Exec exec = Exec::parallel);

}  // namespace radmax
