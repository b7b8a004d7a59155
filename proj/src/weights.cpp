#include "radmax/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optimize.hpp"
#include "radmax/error.hpp"
#include "radmax/radial_geometry.hpp"

namespace radmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int golden_iterations(const SweepGrid& grid) { return 8 * grid.refinement_depth; }

// Bracket in log R around grid index i.
std::pair<double, double> log_bracket(const std::vector<double>& radii, std::size_t i) {
  const double lo = std::log(radii[i == 0 ? 0 : i - 1]);
  const double hi = std::log(radii[std::min(i + 1, radii.size() - 1)]);
  return {lo, hi};
}

struct Best {
  double log_value = kNegInf;
  Witness witness;

  void offer(double lv, const Witness& w) {
    if (lv > log_value) {
      log_value = lv;
      witness = w;
    }
  }
};

ConstantEstimate finish(const Best& best, const SweepGrid& grid, std::string note = {}) {
  ConstantEstimate e;
  e.value = std::exp(best.log_value);
  e.witness = best.witness;
  e.grid = grid.describe();
  e.note = std::move(note);
  return e;
}

// sup and inf of log w0 over [a, b] from a mesh plus golden refinement.
std::pair<double, double> profile_extrema(const RadialDensity& density, double a, double b,
                                          int mesh, int iterations, bool log_spaced) {
  std::vector<double> ts(mesh);
  for (int j = 0; j < mesh; ++j) {
    const double f = static_cast<double>(j) / (mesh - 1);
    ts[j] = log_spaced ? a * std::pow(b / a, f) : a + (b - a) * f;
  }
  ts.front() = a;
  ts.back() = b;
  double hi = kNegInf, lo = kInf;
  int arg_hi = 0, arg_lo = 0;
  for (int j = 0; j < mesh; ++j) {
    const double v = density.log_eval(ts[j]);
    if (std::isnan(v)) continue;
    if (v > hi) hi = v, arg_hi = j;
    if (v < lo) lo = v, arg_lo = j;
  }
  if (hi == kInf || lo == kNegInf) return {hi, lo};
  auto neighbours = [&](int j) {
    return std::pair{ts[std::max(0, j - 1)], ts[std::min(mesh - 1, j + 1)]};
  };
  auto [ha, hb] = neighbours(arg_hi);
  hi = std::max(hi, detail::golden_maximize([&](double t) {
                      const double v = density.log_eval(t);
                      return std::isnan(v) ? kNegInf : v;
                    }, ha, hb, iterations).second);
  auto [la, lb] = neighbours(arg_lo);
  lo = std::min(lo, -detail::golden_maximize([&](double t) {
                       const double v = density.log_eval(t);
                       return std::isnan(v) ? kNegInf : -v;
                     }, la, lb, iterations).second);
  return {hi, lo};
}

// Grid radii plus the radii at which a ball (or its (1+1/n)-dilate) with one
// of the grid's center ratios has a boundary sphere touching a feature point
// of the density.
std::vector<double> sweep_radii(const SweepGrid& grid, const RadialDensity& density,
                                double dilation = 1.0) {
  auto radii = grid.radii();
  auto add = [&](double r) {
    if (std::isfinite(r) && r > grid.R_min && r < grid.R_max) radii.push_back(r);
  };
  for (const auto* pts : {&density.singular_points(), &density.breakpoints()})
    for (double p : *pts)
      for (double m : grid.center_multipliers)
        for (double d : {1.0, dilation}) {
          add(p / (m + d));
          if (m != d) add(p / std::fabs(m - d));
        }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

template <class Body>
void for_each_cell(std::size_t count, Exec exec, Body&& body) {
  detail::ExceptionSlot slot;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < count; ++k) slot.run([&] { body(k); });
  } else {
    for (std::size_t k = 0; k < count; ++k) slot.run([&] { body(k); });
  }
  slot.rethrow();
}

}  // namespace

std::vector<double> SweepGrid::default_multipliers() {
  std::vector<double> m;
  for (int i = 0; i <= 16; ++i) m.push_back(0.25 * i);
  return m;
}

std::vector<double> SweepGrid::radii() const {
  std::vector<double> r(R_count);
  for (int i = 0; i < R_count; ++i)
    r[i] = R_min * std::pow(R_max / R_min, static_cast<double>(i) / (R_count - 1));
  r.back() = R_max;
  return r;
}

SweepGrid SweepGrid::scaled(double factor) const {
  SweepGrid g = *this;
  g.R_min *= factor;
  g.R_max *= factor;
  return g;
}

void SweepGrid::validate() const {
  if (!(R_min > 0.0) || !(R_max > R_min)) throw DomainError("SweepGrid: need 0 < R_min < R_max");
  if (R_count < 8) throw DomainError("SweepGrid: at least 8 radii");
  if (profile_mesh < 8) throw DomainError("SweepGrid: profile mesh needs at least 8 points");
  if (center_multipliers.empty()) throw DomainError("SweepGrid: no center multipliers");
  for (double m : center_multipliers)
    if (!(m >= 0.0)) throw DomainError("SweepGrid: center multipliers must be nonnegative");
  if (refinement_depth < 0) throw DomainError("SweepGrid: negative refinement depth");
}

std::string SweepGrid::describe() const {
  std::ostringstream os;
  os << "R in [" << R_min << ", " << R_max << "] x" << R_count << " log-spaced; "
     << center_multipliers.size() << " s/R values; refinement depth " << refinement_depth
     << "; profile mesh " << profile_mesh;
  return os.str();
}

ConstantEstimate dyadic_oscillation(const RadialDensity& density, const SweepGrid& grid) {
  grid.validate();
  Best best;
  for (double R : grid.radii()) {
    const auto [hi, lo] =
        profile_extrema(density, R, 2.0 * R, grid.profile_mesh, golden_iterations(grid), true);
    Witness w;
    w.R = R;
    if (hi == kInf || lo == kNegInf) {
      best.offer(kInf, w);
      break;
    }
    best.offer(hi - lo, w);
  }
  return finish(best, grid, "sup/inf of w0 on [R, 2R]");
}

DoublingProfile doubling_profile(const RadialDensity& density, int n, const SweepGrid& grid,
                                 const QuadratureConfig& q, Exec exec) {
  grid.validate();
  const double dil = 1.0 + 1.0 / n;
  const auto radii = sweep_radii(grid, density, dil);
  const auto& mult = grid.center_multipliers;
  const std::size_t nm = mult.size(), nr = radii.size();

  auto log_mu = [&](double s, double R) { return ball_measure(density, BallSpec(n, s, R), q).log(); };

  std::vector<double> base(nm * nr), dilated(nm * nr);
  for_each_cell(nm * nr, exec, [&](std::size_t k) {
    const std::size_t m = k / nr, i = k % nr;
    const double R = radii[i];
    base[k] = log_mu(mult[m] * R, R);
    dilated[k] = log_mu(mult[m] * R, dil * R);
  });

  Best k0, k1, k;
  struct Arg {
    std::size_t m1 = 0, m2 = 0, i = 0;
  } a0, a1, ak;
  auto witness = [&](double s1, double s2, double R, bool dilate) {
    Witness w;
    w.n = n;
    w.s = s1;
    w.s2 = s2;
    w.R = R;
    if (dilate) w.R2 = dil * R;
    return w;
  };

  for (std::size_t i = 0; i < nr; ++i) {
    const double R = radii[i];
    for (std::size_t m1 = 0; m1 < nm; ++m1) {
      const double b1 = base[m1 * nr + i];
      const double before0 = k0.log_value;
      k0.offer(dilated[m1 * nr + i] - b1, witness(mult[m1] * R, mult[m1] * R, R, true));
      if (k0.log_value > before0) a0 = {m1, m1, i};
      for (std::size_t m2 = 0; m2 < nm; ++m2) {
        const double gap = std::fabs(mult[m1] - mult[m2]);
        if (gap < 2.0) {
          const double before = k1.log_value;
          k1.offer(base[m2 * nr + i] - b1, witness(mult[m1] * R, mult[m2] * R, R, false));
          if (k1.log_value > before) a1 = {m1, m2, i};
        }
        if (gap < 1.0) {
          const double before = k.log_value;
          k.offer(dilated[m2 * nr + i] - b1, witness(mult[m1] * R, mult[m2] * R, R, true));
          if (k.log_value > before) ak = {m1, m2, i};
        }
      }
    }
  }

  const int iters = golden_iterations(grid);
  if (iters > 0) {
    {
      auto [lo, hi] = log_bracket(radii, a0.i);
      detail::golden_maximize([&](double u) {
        const double R = std::exp(u), s = mult[a0.m1] * R;
        const double v = log_mu(s, dil * R) - log_mu(s, R);
        k0.offer(v, witness(s, s, R, true));
        return v;
      }, lo, hi, iters);
    }
    {
      auto [lo, hi] = log_bracket(radii, a1.i);
      detail::golden_maximize([&](double u) {
        const double R = std::exp(u), s1 = mult[a1.m1] * R, s2 = mult[a1.m2] * R;
        const double v = log_mu(s2, R) - log_mu(s1, R);
        k1.offer(v, witness(s1, s2, R, false));
        return v;
      }, lo, hi, iters);
    }
    {
      auto [lo, hi] = log_bracket(radii, ak.i);
      detail::golden_maximize([&](double u) {
        const double R = std::exp(u), s1 = mult[ak.m1] * R, s2 = mult[ak.m2] * R;
        const double b1 = log_mu(s1, R), b2 = log_mu(s2, R), d2 = log_mu(s2, dil * R);
        k0.offer(d2 - b2, witness(s2, s2, R, true));
        k1.offer(b2 - b1, witness(s1, s2, R, false));
        k.offer(d2 - b1, witness(s1, s2, R, true));
        return d2 - b1;
      }, lo, hi, iters);
    }
  }

  return {finish(k0, grid, "mu(B(s,(1+1/n)R)) / mu(B(s,R))"),
          finish(k1, grid, "mu(B(s2,R)) / mu(B(s,R)), |s - s2| < 2R"),
          finish(k, grid, "mu(B(s2,(1+1/n)R)) / mu(B(s,R)), |s - s2| < R")};
}

ConstantEstimate micro_doubling_constant(const RadialDensity& density, int n,
                                         const SweepGrid& grid, const QuadratureConfig& q) {
  return doubling_profile(density, n, grid, q).micro;
}

ConstantEstimate weak_doubling_constant(const RadialDensity& density, int n,
                                        const SweepGrid& grid, const QuadratureConfig& q) {
  return doubling_profile(density, n, grid, q).weak;
}

ConstantEstimate strong_micro_constant(const RadialDensity& density, int n,
                                       const SweepGrid& grid, const QuadratureConfig& q) {
  return doubling_profile(density, n, grid, q).strong;
}

namespace {

// Shared driver for the Muckenhoupt-type characteristics: evaluates
// log_ratio(s, R) on the grid (an exception marks the cell +inf), then
// refines around the finite argmax.
template <class LogRatio>
ConstantEstimate ball_characteristic(const RadialDensity& density, int n, const SweepGrid& grid,
                                     Exec exec, LogRatio&& log_ratio, std::string note) {
  grid.validate();
  const auto radii = sweep_radii(grid, density);
  const auto& mult = grid.center_multipliers;
  const std::size_t nm = mult.size(), nr = radii.size();
  std::vector<double> value(nm * nr);
  for_each_cell(nm * nr, exec, [&](std::size_t k) {
    const double R = radii[k % nr];
    try {
      value[k] = log_ratio(mult[k / nr] * R, R);
    } catch (const DivergenceError&) {
      value[k] = kInf;
    }
  });
  Best best;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < value.size(); ++k) {
    Witness w;
    w.n = n;
    w.s = mult[k / nr] * radii[k % nr];
    w.R = radii[k % nr];
    const double before = best.log_value;
    best.offer(value[k], w);
    if (best.log_value > before) arg = k;
  }
  if (best.log_value < kInf && golden_iterations(grid) > 0) {
    auto [lo, hi] = log_bracket(radii, arg % nr);
    const double m = mult[arg / nr];
    detail::golden_maximize([&](double u) {
      const double R = std::exp(u);
      double v;
      try {
        v = log_ratio(m * R, R);
      } catch (const DivergenceError&) {
        v = kInf;
      }
      Witness w;
      w.n = n;
      w.s = m * R;
      w.R = R;
      best.offer(v, w);
      return v;
    }, lo, hi, golden_iterations(grid));
  }
  return finish(best, grid, std::move(note));
}

}  // namespace

ConstantEstimate ap_constant(const RadialDensity& density, int n, double p, const SweepGrid& grid,
                             const QuadratureConfig& q, Exec exec) {
  if (!(p > 1.0)) throw DomainError("A_p constant needs p > 1");
  const RadialDensity dual = density.pow(1.0 / (1.0 - p));
  if (n < density.integrability_floor() || n < dual.integrability_floor()) {
    ConstantEstimate e;
    e.value = kInf;
    e.witness.n = n;
    e.witness.R = grid.R_min;
    e.grid = grid.describe();
    e.note = "weight or dual weight not locally integrable at the origin";
    return e;
  }
  return ball_characteristic(
      density, n, grid, exec,
      [&](double s, double R) {
        const BallSpec b(n, s, R);
        return std::log(ball_average(density, b, q)) + (p - 1.0) * std::log(ball_average(dual, b, q));
      },
      "avg(w) avg(w^(1/(1-p)))^(p-1), p=" + std::to_string(p));
}

ConstantEstimate a1_constant(const RadialDensity& density, int n, const SweepGrid& grid,
                             const QuadratureConfig& q, Exec exec) {
  const int iters = golden_iterations(grid);
  return ball_characteristic(
      density, n, grid, exec,
      [&](double s, double R) {
        const BallSpec b(n, s, R);
        const auto [hi, lo] =
            profile_extrema(density, b.support_lo(), b.support_hi(), grid.profile_mesh, iters, false);
        (void)hi;
        if (lo == kNegInf) return kInf;
        return std::log(ball_average(density, b, q)) - lo;
      },
      "avg(w) / inf_B w");
}

HardyCheck hardy_upper_check(const RadialDensity& density, int n, const SweepGrid& grid,
                             const QuadratureConfig& q) {
  HardyCheck h;
  h.beta = dyadic_oscillation(density, grid).value;
  if (h.beta < kInf) {
    h.threshold_dimension = std::max(1, static_cast<int>(std::ceil(std::log2(2.0 * h.beta) - 1e-12)));
  } else {
    h.threshold_dimension = std::numeric_limits<int>::max();
  }
  h.applicable = n >= h.threshold_dimension;
  double worst = kNegInf;
  for (double R : grid.radii()) {
    const double r = std::log(ball_average(density, BallSpec(n, 0.0, R), q)) - density.log_eval(R);
    if (r > worst) {
      worst = r;
      h.witness_R = R;
    }
  }
  h.worst_ratio = std::exp(worst);
  h.holds = !h.applicable || h.worst_ratio <= 2.0 * h.beta * (1.0 + 1e-9);
  return h;
}

Comparability decreasing_comparability(const RadialDensity& density, double tol) {
  Comparability c;
  constexpr int kLevels = 4;
  for (int level = 0; level < kLevels; ++level) {
    const double decades = 2.0 + level;
    const int points = 512 << level;
    double running_min = kInf, running_min_t = 0.0;
    double q = kNegInf;
    double ws = 0.0, wt = 0.0;
    for (int i = 0; i < points; ++i) {
      const double t = std::pow(10.0, -decades + 2.0 * decades * i / (points - 1));
      const double v = density.log_eval(t);
      if (!std::isfinite(v)) continue;
      if (v < running_min) running_min = v, running_min_t = t;
      if (v - running_min > q) q = v - running_min, ws = running_min_t, wt = t;
    }
    c.q_by_level.push_back(std::exp(q));
    c.q = std::exp(q);
    c.witness_s = ws;
    c.witness_t = wt;
  }
  const double last = c.q_by_level[kLevels - 1], prev = c.q_by_level[kLevels - 2];
  c.comparable = last <= prev * (1.0 + tol);
  return c;
}

}  // namespace radmax
