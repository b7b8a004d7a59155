#include "radmax/density.hpp"

#include <cmath>
#include <sstream>

#include "radmax/error.hpp"

namespace radmax {

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool detect_decreasing(const RadialDensity::LogProfile& f) {
  constexpr int kMesh = 2048;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kMesh; ++i) {
    const double t = std::pow(10.0, -4.0 + 8.0 * (i + 0.37) / kMesh);
    const double v = f(t);
    if (std::isnan(v)) continue;
    if (v > prev + 1e-12 * std::fmax(1.0, std::fabs(prev))) return false;
    prev = v;
  }
  return true;
}

}  // namespace

RadialDensity::RadialDensity(std::string name, LogProfile log_profile, Traits traits)
    : name_(std::move(name)), log_profile_(std::move(log_profile)), traits_(std::move(traits)) {
  if (!traits_.integrability_floor) {
    int floor = 1;
    if (traits_.homogeneity && *traits_.homogeneity < 0.0)
      floor = std::max(1, static_cast<int>(std::floor(-*traits_.homogeneity)) + 1);
    traits_.integrability_floor = floor;
  }
  if (traits_.homogeneity && traits_.integrability_floor &&
      !(*traits_.homogeneity + *traits_.integrability_floor > 0.0))
    throw DomainError("integrability floor inconsistent with homogeneity");
  if (!traits_.is_decreasing) traits_.is_decreasing = detect_decreasing(log_profile_);
}

double RadialDensity::eval(double t) const { return std::exp(log_profile_(t)); }

RadialDensity RadialDensity::constant(double c) {
  if (!(c > 0.0)) throw DomainError("constant density must be positive");
  const double lc = std::log(c);
  Traits tr;
  tr.homogeneity = 0.0;
  tr.is_decreasing = true;
  return RadialDensity(fmt_num(c), [lc](double) { return lc; }, tr);
}

RadialDensity RadialDensity::power(double gamma) {
  Traits tr;
  tr.homogeneity = gamma;
  tr.is_decreasing = gamma <= 0.0;
  return RadialDensity("power(" + fmt_num(gamma) + ")",
                       [gamma](double t) { return gamma == 0.0 ? 0.0 : gamma * std::log(t); }, tr);
}

RadialDensity RadialDensity::shell(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("shell exponent must lie in (0, 1)");
  Traits tr;
  tr.singular_points = {1.0};
  tr.is_decreasing = false;
  tr.integrability_floor = 1;
  return RadialDensity("shell(" + fmt_num(alpha) + ")",
                       [alpha](double t) { return -alpha * std::log(std::fabs(1.0 - t)); }, tr);
}

RadialDensity RadialDensity::power_family(double alpha, int n) {
  if (!(alpha < 1.0)) throw DomainError("power family requires alpha < 1");
  const double gamma = -alpha * n;
  RadialDensity d = power(gamma);
  d.name_ = "power_family(" + fmt_num(alpha) + ")@n=" + std::to_string(n);
  return d;
}

RadialDensity RadialDensity::exp_decay() {
  Traits tr;
  tr.is_decreasing = true;
  return RadialDensity("exp(0-t)", [](double t) { return -t; }, tr);
}

RadialDensity RadialDensity::inverse_quadratic() {
  Traits tr;
  tr.is_decreasing = true;
  return RadialDensity("1/(1+t^2)", [](double t) { return -std::log1p(t * t); }, tr);
}

RadialDensity RadialDensity::pow(double q) const {
  Traits tr;
  tr.singular_points = traits_.singular_points;
  tr.breakpoints = traits_.breakpoints;
  if (traits_.homogeneity) tr.homogeneity = *traits_.homogeneity * q;
  if (traits_.is_decreasing && q > 0.0) tr.is_decreasing = *traits_.is_decreasing;
  auto base = log_profile_;
  return RadialDensity("(" + name_ + ")^" + fmt_num(q),
                       [base, q](double t) { return q * base(t); }, tr);
}

}  // namespace radmax
