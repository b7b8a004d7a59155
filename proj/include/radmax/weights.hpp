#pragma once

#include <limits>
#include <string>
#include <vector>

#include "radmax/density.hpp"
#include "radmax/parallel.hpp"
#include "radmax/quadrature.hpp"

namespace radmax {

/// Parameter grid for certified lower bounds of suprema over balls.
struct SweepGrid {
  double R_min = 1e-2;
  double R_max = 1e2;
  int R_count = 64;
  /// Values of s/R.
  std::vector<double> center_multipliers = default_multipliers();
  /// Golden-section passes around the grid argmax (8 iterations per level).
  int refinement_depth = 3;
  /// Mesh points per annulus / interval for sup and inf of the profile.
  int profile_mesh = 129;
  std::vector<int> dimensions;

  static std::vector<double> default_multipliers();
  std::vector<double> radii() const;
  /// Same grid with every radius multiplied by `factor`.
  SweepGrid scaled(double factor) const;
  void validate() const;
  std::string describe() const;
};

struct Witness {
  int n = 0;
  double s = 0.0;
  double R = 0.0;
  /// Second center distance for two-ball ratios.
  double s2 = std::numeric_limits<double>::quiet_NaN();
  /// Dilated radius for micro-doubling ratios.
  double R2 = std::numeric_limits<double>::quiet_NaN();
};

/// Lower bound of a supremum, with the parameters that attain it.
struct ConstantEstimate {
  double value = 1.0;
  Witness witness;
  std::string grid;
  std::string note;
  static constexpr const char* certified_direction = "lower bound of a supremum";

  bool finite() const { return value < std::numeric_limits<double>::infinity(); }
};

/// beta: max over the radius grid of sup/inf of w0 on [R, 2R].
ConstantEstimate dyadic_oscillation(const RadialDensity& density, const SweepGrid& grid);

struct DoublingProfile {
  ConstantEstimate micro;   ///< K0: mu(B(x,(1+1/n)R)) / mu(B(x,R))
  ConstantEstimate weak;    ///< K1: mu(B(y,R)) / mu(B(x,R)), |s1 - s2| < 2R
  ConstantEstimate strong;  ///< K:  mu(B(y,(1+1/n)R)) / mu(B(x,R)), |s1 - s2| < R
};

/// All three doubling constants from one shared set of ball evaluations.
/// Every evaluated strong ratio factors through evaluated micro and weak
/// ratios, so strong <= micro * weak holds exactly.
DoublingProfile doubling_profile(const RadialDensity& density, int n, const SweepGrid& grid,
                                 const QuadratureConfig& q = {}, Exec exec = Exec::parallel);

ConstantEstimate micro_doubling_constant(const RadialDensity& density, int n,
                                         const SweepGrid& grid, const QuadratureConfig& q = {});
ConstantEstimate weak_doubling_constant(const RadialDensity& density, int n,
                                        const SweepGrid& grid, const QuadratureConfig& q = {});
ConstantEstimate strong_micro_constant(const RadialDensity& density, int n,
                                       const SweepGrid& grid, const QuadratureConfig& q = {});

/// Muckenhoupt A_p characteristic over the (s, R) grid; +inf with a witness
/// ball when the dual weight w0^(1/(1-p)) is not integrable there.
ConstantEstimate ap_constant(const RadialDensity& density, int n, double p, const SweepGrid& grid,
                             const QuadratureConfig& q = {}, Exec exec = Exec::parallel);

/// A_1 characteristic: ball average over the infimum of w0 on the ball.
ConstantEstimate a1_constant(const RadialDensity& density, int n, const SweepGrid& grid,
                             const QuadratureConfig& q = {}, Exec exec = Exec::parallel);

struct HardyCheck {
  double worst_ratio = 1.0;  ///< max_R mu(B_R) / (w0(R) |B_R|)
  double witness_R = 0.0;
  double beta = 1.0;
  /// Smallest N with 2^N >= 2 beta; the bound 2 beta is claimed for n >= N.
  int threshold_dimension = 1;
  bool applicable = false;
  bool holds = true;
};

HardyCheck hardy_upper_check(const RadialDensity& density, int n, const SweepGrid& grid,
                             const QuadratureConfig& q = {});

struct Comparability {
  bool comparable = true;
  /// Smallest q with w0(t) <= q w0(s) for all mesh s <= t, at the finest level.
  double q = 1.0;
  double witness_s = 0.0;
  double witness_t = 0.0;
  std::vector<double> q_by_level;
};

/// Searches nested meshes for the comparability constant with a decreasing
/// function; `comparable` is false when q keeps growing beyond `tol`.
Comparability decreasing_comparability(const RadialDensity& density, double tol = 1e-3);

}  // namespace radmax
