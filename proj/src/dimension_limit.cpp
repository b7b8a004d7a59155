#include "radmax/dimension_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "optimize.hpp"
#include "radmax/error.hpp"
#include "radmax/maximal.hpp"

namespace radmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Body>
void parallel_cells(std::size_t count, Exec exec, Body&& body) {
  detail::ExceptionSlot slot;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < count; ++k) slot.run([&] { body(k); });
  } else {
    for (std::size_t k = 0; k < count; ++k) slot.run([&] { body(k); });
  }
  slot.rethrow();
}

Json dimensions_json(const std::vector<int>& dims) { return Json(dims); }

}  // namespace

KernelCertificate approx_identity_certificate(const BallSpec& spec, double eps,
                                              const QuadratureConfig& q, int mesh) {
  const double T = spec.T();
  if (!(eps > 0.0 && eps < T)) throw DomainError("approx_identity_certificate: need 0 < eps < T");
  if (mesh < 2) throw DomainError("approx_identity_certificate: mesh needs two points");
  const auto one = RadialDensity::constant(1.0);
  const double log_vol = log_ball_volume(spec.n, spec.R).log();

  KernelCertificate c;
  c.mass_error = std::fabs(std::expm1(ball_measure(one, spec, q).log() - log_vol));
  c.tail_below = std::exp(ball_measure_between(one, spec, 0.0, T - eps, q).log() - log_vol);
  c.tail_above = std::exp(ball_measure_between(one, spec, T + eps, spec.support_hi(), q).log() - log_vol);

  const double lo = spec.support_lo(), hi = spec.support_hi();
  c.min_phi = kInf;
  for (int i = 0; i < mesh; ++i) {
    const double t = lo + (hi - lo) * i / (mesh - 1);
    c.min_phi = std::min(c.min_phi, kernel_phi(spec, t));
  }

  double prev = kInf;
  for (int i = 0; i < mesh; ++i) {
    const double t = T + (hi - T) * i / (mesh - 1);
    const double lp = log_kernel_phi(spec, t);
    if (lp > prev + 1e-12 * std::max(1.0, std::fabs(prev))) c.decreasing_beyond_T = false;
    prev = lp;
  }

  if (spec.s > 0.0) {
    const int n = spec.n;
    const double log_const = std::log(static_cast<double>(n) / (n - 1)) + log_sphere_surface(n - 1).log() -
                             log_sphere_surface(n).log() - n * std::log(spec.R);
    c.double_estimate_violation = -kInf;
    for (int i = 1; i + 1 < mesh; ++i) {
      const double t = lo + (hi - lo) * i / (mesh - 1);
      const double cos_alpha = ((spec.s - spec.R) * (spec.s + spec.R) + t * t) / (2.0 * spec.s * t);
      const double sin_alpha = cap_angle_sin(spec, t);
      if (!(cos_alpha > 0.0) || !(sin_alpha > 0.0)) continue;
      const double lp = log_kernel_phi(spec, t);
      const double lower = log_const + (n - 1) * std::log(t * sin_alpha);
      const double upper = lower - std::log(cos_alpha);
      c.double_estimate_violation =
          std::max({c.double_estimate_violation, std::expm1(lower - lp), std::expm1(lp - upper)});
      ++c.double_estimate_points;
    }
    if (c.double_estimate_points == 0) c.double_estimate_violation = 0.0;
  }
  return c;
}

std::vector<int> geometric_schedule(int first, int factor, int cap) {
  if (first < 2 || factor < 2 || cap < first) throw DomainError("geometric_schedule: bad parameters");
  std::vector<int> out;
  for (long long n = first; n < cap; n *= factor) out.push_back(static_cast<int>(n));
  out.push_back(cap);
  return out;
}

void LimitExperiment::validate() const {
  if (balls.empty()) throw DomainError("limit experiment: no balls");
  if (dimensions.empty()) throw DomainError("limit experiment: empty dimension schedule");
  if (!tolerances.empty() && tolerances.size() != dimensions.size())
    throw DomainError("limit experiment: one tolerance per dimension");
  for (auto [s, R] : balls) {
    BallSpec(2, s, R);
    const double T = std::hypot(s, R);
    for (const auto* pts : {&density.singular_points(), &density.breakpoints()})
      for (double p : *pts)
        if (std::fabs(T - p) <= 1e-9 * std::max(1.0, p))
          throw DomainError("limit experiment: T = " + format_double(T) +
                            " lies on a discontinuity of the density");
  }
}

LimitTable limit_table(const LimitExperiment& exp, Exec exec) {
  exp.validate();
  const std::size_t nb = exp.balls.size(), nd = exp.dimensions.size();
  LimitTable table;
  table.rows.resize(nb * nd);
  parallel_cells(nb * nd, exec, [&](std::size_t k) {
    const auto [s, R] = exp.balls[k / nd];
    LimitRow& row = table.rows[k];
    row.s = s;
    row.R = R;
    row.T = std::hypot(s, R);
    row.n = exp.dimensions[k % nd];
    row.average = ball_average(exp.density, BallSpec(row.n, s, R), exp.q);
    row.target = exp.density.eval(row.T);
    row.error = std::fabs(row.average - row.target);
  });

  const double last_tol = exp.tolerances.empty() ? 1e-2 : exp.tolerances.back();
  for (std::size_t b = 0; b < nb; ++b) {
    const LimitRow& first = table.rows[b * nd];
    const LimitRow& last = table.rows[b * nd + nd - 1];
    const double floor = 10.0 * exp.q.rel_tol * std::max(1.0, std::fabs(last.target));
    const std::string where = "(s, R) = (" + format_double(last.s) + ", " + format_double(last.R) + ")";
    if (!(last.error < last_tol))
      table.failures.push_back(where + ": final error " + format_double(last.error) + " >= " +
                               format_double(last_tol));
    if (!(last.error < first.error || last.error <= floor))
      table.failures.push_back(where + ": error did not decrease");
  }
  table.passed = table.failures.empty();

  auto& rep = table.report;
  rep.parameters()["density"] = exp.density.name();
  Json balls = Json::array();
  for (auto [s, R] : exp.balls) balls.push_back({s, R});
  rep.parameters()["balls"] = balls;
  rep.parameters()["dimensions"] = dimensions_json(exp.dimensions);
  rep.parameters()["final_tolerance"] = last_tol;
  rep.provenance()["quadrature"] = quadrature_provenance(exp.q);
  for (const auto& r : table.rows)
    rep.add_row({r.s, r.R, r.T, static_cast<long long>(r.n), r.average, r.target, r.error});
  return table;
}

double GrowthFit::rate() const { return model == GrowthModel::exponential ? std::exp(slope) : slope; }

GrowthFit fit_growth(const std::vector<double>& x, const std::vector<double>& y, GrowthModel model) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_growth: need >= 2 paired points");
  GrowthFit fit;
  fit.model = model;
  fit.x = x;
  fit.y = y;
  const std::size_t k = x.size();
  std::vector<double> X(k), Y(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) throw DomainError("fit_growth: values must be finite and positive");
    if (model == GrowthModel::power && !(x[i] > 0.0)) throw DomainError("fit_growth: power fit needs x > 0");
    X[i] = model == GrowthModel::power ? std::log(x[i]) : x[i];
    Y[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) mx += X[i], my += Y[i];
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
    syy += (Y[i] - my) * (Y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_growth: abscissae must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = Y[i] - fit.intercept - fit.slope * X[i];
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.residual_rms = std::sqrt(ss_res / k);
  if (k > 2) {
    fit.slope_std_error = std::sqrt(ss_res / (k - 2) / sxx);
    const boost::math::students_t dist(static_cast<double>(k - 2));
    const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.band_lo = fit.slope - tq * fit.slope_std_error;
    fit.band_hi = fit.slope + tq * fit.slope_std_error;
  } else {
    fit.slope_std_error = kInf;
    fit.band_lo = -kInf;
    fit.band_hi = kInf;
  }
  return fit;
}

std::pair<std::vector<double>, std::vector<double>> fit_window(const std::vector<double>& x,
                                                               const std::vector<double>& y,
                                                               std::optional<double> min_x) {
  std::pair<std::vector<double>, std::vector<double>> out;
  const std::size_t start = x.size() / 2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool keep = min_x ? x[i] >= *min_x : i >= start;
    if (keep) {
      out.first.push_back(x[i]);
      out.second.push_back(y[i]);
    }
  }
  return out;
}

ShellCounterexample shell_counterexample(double alpha, const ShellOptions& opt, Exec exec) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("shell counterexample needs 0 < alpha < 1");
  if (opt.dimensions.size() < 2) throw DomainError("shell counterexample needs two dimensions");
  const auto shell = RadialDensity::shell(alpha);
  ShellCounterexample out;
  out.alpha = alpha;
  out.dimensions = opt.dimensions;
  const std::size_t nd = opt.dimensions.size();
  out.centered_ratio.resize(nd);
  out.shifted_ratio.resize(nd);
  out.delta_bound.resize(nd);
  out.delta_monotone.resize(nd);
  std::vector<char> monotone(nd);
  parallel_cells(nd, exec, [&](std::size_t i) {
    const int n = opt.dimensions[i];
    out.centered_ratio[i] = ball_average(shell, BallSpec(n, 0.0, 1.0), opt.q);
    out.shifted_ratio[i] = ball_average(shell, BallSpec(n, 1.0, 1.0), opt.q);
    const auto d = delta_lower_bound(shell, n, opt.level_mesh, opt.q, Exec::serial);
    out.delta_bound[i] = d.estimate.value;
    monotone[i] = d.monotone;
  });
  for (std::size_t i = 0; i < nd; ++i) out.delta_monotone[i] = monotone[i] != 0;
  out.limit_target = std::pow(std::sqrt(2.0) - 1.0, -alpha);
  out.limit_distance = std::fabs(out.shifted_ratio.back() - out.limit_target);

  const std::vector<double> xs(opt.dimensions.begin(), opt.dimensions.end());
  {
    auto [x, y] = fit_window(xs, out.centered_ratio, opt.fit_min_n);
    out.centered_fit = fit_growth(x, y, GrowthModel::power);
  }
  {
    auto [x, y] = fit_window(xs, out.delta_bound, opt.fit_min_n);
    out.delta_fit = fit_growth(x, y, GrowthModel::power);
  }

  std::vector<std::string> columns{"n", "centered_ratio", "shifted_ratio", "delta_bound", "delta_monotone"};
  if (opt.doubling_grid) {
    for (int n : opt.dimensions) out.doubling.push_back(doubling_profile(shell, n, *opt.doubling_grid, opt.q, exec));
    for (const char* c : {"K0", "K1", "K"}) columns.push_back(c);
  }
  out.report = ExperimentReport("counterexample", columns);
  auto& rep = out.report;
  rep.parameters()["alpha"] = alpha;
  rep.parameters()["dimensions"] = dimensions_json(opt.dimensions);
  rep.parameters()["level_mesh"] = opt.level_mesh;
  rep.parameters()["limit_target"] = out.limit_target;
  rep.parameters()["limit_distance"] = out.limit_distance;
  rep.parameters()["centered_slope"] = out.centered_fit.slope;
  rep.parameters()["centered_slope_band"] = {out.centered_fit.band_lo, out.centered_fit.band_hi};
  rep.parameters()["centered_r_squared"] = out.centered_fit.r_squared;
  rep.parameters()["delta_slope"] = out.delta_fit.slope;
  rep.parameters()["delta_r_squared"] = out.delta_fit.r_squared;
  rep.provenance()["quadrature"] = quadrature_provenance(opt.q);
  if (opt.doubling_grid) rep.provenance()["sweep_grid"] = opt.doubling_grid->describe();
  for (std::size_t i = 0; i < nd; ++i) {
    std::vector<ExperimentReport::Cell> row{static_cast<long long>(opt.dimensions[i]), out.centered_ratio[i],
                                            out.shifted_ratio[i], out.delta_bound[i],
                                            static_cast<bool>(out.delta_monotone[i])};
    if (opt.doubling_grid) {
      row.emplace_back(out.doubling[i].micro.value);
      row.emplace_back(out.doubling[i].weak.value);
      row.emplace_back(out.doubling[i].strong.value);
    }
    rep.add_row(std::move(row));
  }
  return out;
}

PowerFamilyResult power_family_experiment(double alpha, const PowerFamilyOptions& opt, Exec exec) {
  if (!(alpha >= 0.0)) throw DomainError("power family needs alpha >= 0");
  if (alpha >= 1.0) throw DomainError("power family needs alpha < 1 for local integrability");
  if (opt.dimensions.size() < 2) throw DomainError("power family needs two dimensions");
  PowerFamilyResult out;
  out.alpha = alpha;
  out.dimensions = opt.dimensions;
  const std::size_t nd = opt.dimensions.size();
  out.delta_bound.resize(nd);
  std::vector<char> monotone(nd);
  parallel_cells(nd, exec, [&](std::size_t i) {
    const int n = opt.dimensions[i];
    const auto d = delta_lower_bound(RadialDensity::power_family(alpha, n), n, opt.level_mesh, opt.q,
                                     Exec::serial);
    out.delta_bound[i] = d.estimate.value;
    monotone[i] = d.monotone;
  });
  for (char m : monotone) out.delta_monotone.push_back(m != 0);
  const std::vector<double> xs(opt.dimensions.begin(), opt.dimensions.end());
  auto [x, y] = fit_window(xs, out.delta_bound, opt.fit_min_n);
  out.fit = fit_growth(x, y, GrowthModel::exponential);

  auto& rep = out.report;
  rep.parameters()["alpha"] = alpha;
  rep.parameters()["dimensions"] = dimensions_json(opt.dimensions);
  rep.parameters()["level_mesh"] = opt.level_mesh;
  rep.parameters()["fitted_a"] = out.fit.rate();
  rep.parameters()["log_slope"] = out.fit.slope;
  rep.parameters()["log_slope_band"] = {out.fit.band_lo, out.fit.band_hi};
  rep.parameters()["r_squared"] = out.fit.r_squared;
  rep.provenance()["quadrature"] = quadrature_provenance(opt.q);
  for (std::size_t i = 0; i < nd; ++i)
    rep.add_row({static_cast<long long>(opt.dimensions[i]), out.delta_bound[i], std::log(out.delta_bound[i]),
                 static_cast<bool>(out.delta_monotone[i])});
  return out;
}

}  // namespace radmax
