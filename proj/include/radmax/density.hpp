#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace radmax {

/// A radial profile w0 on (0, inf), evaluated through its logarithm. The
/// measure in R^n is d mu(x) = w0(|x|) dx.
class RadialDensity {
 public:
  using LogProfile = std::function<double(double)>;

  struct Traits {
    /// Points where w0 may be unbounded; quadrature approaches them in log scale.
    std::vector<double> singular_points;
    /// Jump discontinuities; used as plain quadrature breakpoints.
    std::vector<double> breakpoints;
    /// gamma when w0(t) = c t^gamma.
    std::optional<double> homogeneity;
    /// Smallest N with w0 in L^1_loc([0, inf), t^(N-1) dt). Derived from the
    /// homogeneity when left unset.
    std::optional<int> integrability_floor;
    /// Detected on a mesh when left unset.
    std::optional<bool> is_decreasing;
  };

  RadialDensity(std::string name, LogProfile log_profile, Traits traits = {});

  static RadialDensity constant(double c);
  /// t^gamma.
  static RadialDensity power(double gamma);
  /// |1 - t|^(-alpha).
  static RadialDensity shell(double alpha);
  /// t^(-alpha n), the dimension-dependent power family at a fixed n.
  static RadialDensity power_family(double alpha, int n);
  static RadialDensity exp_decay();
  /// 1 / (1 + t^2).
  static RadialDensity inverse_quadratic();

  /// w0^q, sharing singular structure (used for the dual A_p weight).
  RadialDensity pow(double q) const;

  const std::string& name() const { return name_; }
  double log_eval(double t) const { return log_profile_(t); }
  double eval(double t) const;

  const std::vector<double>& singular_points() const { return traits_.singular_points; }
  const std::vector<double>& breakpoints() const { return traits_.breakpoints; }
  std::optional<double> homogeneity() const { return traits_.homogeneity; }
  int integrability_floor() const { return *traits_.integrability_floor; }
  bool is_decreasing() const { return *traits_.is_decreasing; }

 private:
  std::string name_;
  LogProfile log_profile_;
  Traits traits_;
};

}  // namespace radmax
