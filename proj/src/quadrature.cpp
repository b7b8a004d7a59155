#include "radmax/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "radmax/error.hpp"

namespace radmax {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be positive");
  if (!(singular_cutoff > 0.0 && singular_cutoff < 1.0))
    throw DomainError("singular_cutoff must lie in (0, 1)");
  if (mc_samples < 10000) throw DomainError("Monte Carlo sample count must be at least 1e4");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class Map { identity, from_lo, from_hi };

// A piece in the transformed variable u, where t = lo + e^u (from_lo),
// t = hi - e^u (from_hi) or t = u (identity).
struct Piece {
  Map map;
  double anchor;
  double u_lo;
  double u_hi;
};

struct Interval {
  int piece;
  double a;
  double b;
  double integral;
  double error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

class Integrator {
 public:
  Integrator(const std::function<double(double)>& log_f, std::vector<Piece> pieces,
             const QuadratureConfig& cfg)
      : log_f_(log_f), pieces_(std::move(pieces)), cfg_(cfg) {}

  double log_g(const Piece& p, double u) const {
    switch (p.map) {
      case Map::identity:
        return log_f_(u);
      case Map::from_lo:
        return log_f_(p.anchor + std::exp(u)) + u;
      case Map::from_hi:
        return log_f_(p.anchor - std::exp(u)) + u;
    }
    return kNegInf;
  }

  double sample_max() const {
    double m = kNegInf;
    constexpr int kSamples = 65;
    for (const auto& p : pieces_) {
      for (int i = 0; i < kSamples; ++i) {
        const double u = p.u_lo + (p.u_hi - p.u_lo) * (i + 0.5) / kSamples;
        m = std::fmax(m, log_g(p, u));
      }
    }
    return m;
  }

  // Gauss-Kronrod 15 on [a, b] of exp(log_g - shift_).
  Interval rule(int piece, double a, double b) {
    const Piece& p = pieces_[piece];
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto eval = [&](double u) {
      const double lg = log_g(p, u);
      if (std::isnan(lg)) return 0.0;
      max_seen_ = std::fmax(max_seen_, lg);
      return std::exp(lg - shift_);
    };
    std::array<double, 15> fv{};
    fv[7] = eval(center);
    for (int j = 0; j < 7; ++j) {
      fv[j] = eval(center - half * kXgk[j]);
      fv[14 - j] = eval(center + half * kXgk[j]);
    }
    double kronrod = kWgk[7] * fv[7];
    double gauss = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
      kronrod += kWgk[j] * (fv[j] + fv[14 - j]);
      if (j % 2 == 1) gauss += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    const double mean = 0.5 * kronrod;
    double resasc = kWgk[7] * std::fabs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
      resasc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
    kronrod *= half;
    gauss *= half;
    resasc *= half;
    double err = std::fabs(kronrod - gauss);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::fmin(1.0, std::pow(200.0 * err / resasc, 1.5));
    err = std::fmax(err, 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(kronrod));
    return {piece, a, b, kronrod, err};
  }

  LogIntegral run() {
    shift_ = sample_max();
    LogIntegral out;
    for (int attempt = 0; attempt < 4; ++attempt) {
      if (shift_ == kNegInf || std::isnan(shift_)) {
        out.value = LogMeasure::zero();
        return out;
      }
      max_seen_ = kNegInf;
      out = adapt();
      // A node hit a value far above the sampled maximum: rescale and redo.
      if (!(max_seen_ > shift_ + 30.0)) break;
      shift_ = max_seen_;
    }
    return out;
  }

 private:
  LogIntegral adapt() {
    std::priority_queue<Interval> heap;
    constexpr int kInitialSplits = 4;
    for (int i = 0; i < static_cast<int>(pieces_.size()); ++i) {
      const auto& p = pieces_[i];
      const double step = (p.u_hi - p.u_lo) / kInitialSplits;
      for (int k = 0; k < kInitialSplits; ++k) {
        const double a = p.u_lo + k * step;
        const double b = (k + 1 == kInitialSplits) ? p.u_hi : a + step;
        heap.push(rule(i, a, b));
      }
    }
    auto totals = [&heap] {
      auto copy = heap;
      double integral = 0.0, error = 0.0;
      while (!copy.empty()) {
        integral += copy.top().integral;
        error += copy.top().error;
        copy.pop();
      }
      return std::pair{integral, error};
    };
    auto [integral, error] = totals();
    int subdivisions = 0;
    while (error > cfg_.rel_tol * std::fabs(integral) && subdivisions < cfg_.max_subdivisions) {
      const Interval worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b)) {
        // Interval at floating-point resolution; accept its estimate.
        heap.push({worst.piece, worst.a, worst.b, worst.integral, 0.0});
        std::tie(integral, error) = totals();
        continue;
      }
      const Interval left = rule(worst.piece, worst.a, mid);
      const Interval right = rule(worst.piece, mid, worst.b);
      integral += left.integral + right.integral - worst.integral;
      error += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      ++subdivisions;
      if (subdivisions % 256 == 0) std::tie(integral, error) = totals();
    }
    std::tie(integral, error) = totals();
    LogIntegral out;
    out.subdivisions = subdivisions;
    out.converged = error <= cfg_.rel_tol * std::fabs(integral);
    if (integral <= 0.0) {
      out.value = LogMeasure::zero();
      out.rel_error = 0.0;
      return out;
    }
    out.value = LogMeasure::from_log(shift_ + std::log(integral));
    out.rel_error = error / integral;
    return out;
  }

  const std::function<double(double)>& log_f_;
  std::vector<Piece> pieces_;
  const QuadratureConfig& cfg_;
  double shift_ = 0.0;
  double max_seen_ = kNegInf;
};

// Local power-law remainder of the integral over (anchor, anchor + delta) (or
// mirrored). Returns -inf when the integrand vanishes there.
double endpoint_remainder(const std::function<double(double)>& log_f, double anchor,
                          double delta, double direction, double partial_log) {
  const double h1 = log_f(anchor + direction * delta);
  const double h2 = log_f(anchor + direction * 2.0 * delta);
  if (!std::isfinite(h1) || !std::isfinite(h2)) {
    if (h1 == std::numeric_limits<double>::infinity())
      throw DivergenceError("integrand is infinite next to a singular endpoint", partial_log);
    return kNegInf;
  }
  const double exponent = (h2 - h1) / std::log(2.0);
  if (exponent <= -1.0 + 1e-6)
    throw DivergenceError("non-integrable singularity at t = " + std::to_string(anchor) +
                              " (local exponent " + std::to_string(exponent) + ")",
                          partial_log);
  return h1 + std::log(delta) - std::log1p(exponent);
}

}  // namespace

LogIntegral integrate_log(const std::function<double(double)>& log_f,
                          const std::vector<Segment>& segments, const QuadratureConfig& cfg) {
  std::vector<Piece> pieces;
  struct Remainder {
    double anchor;
    double delta;
    double direction;
  };
  std::vector<Remainder> remainders;
  const bool substitute = cfg.singularity_mode == SingularityMode::log_substitution;

  auto add_from = [&](double anchor, double far, Map map) {
    const double length = std::fabs(far - anchor);
    const double resolution = 16.0 * std::numeric_limits<double>::epsilon() * std::fabs(anchor);
    const double delta = std::fmax(cfg.singular_cutoff * length, resolution);
    if (!(delta < length)) {
      pieces.push_back({Map::identity, 0.0, std::fmin(anchor, far), std::fmax(anchor, far)});
      return;
    }
    pieces.push_back({map, anchor, std::log(delta), std::log(length)});
    remainders.push_back({anchor, delta, map == Map::from_lo ? 1.0 : -1.0});
  };

  for (const auto& seg : segments) {
    if (!(seg.hi > seg.lo)) continue;
    const bool lo_sing = substitute && seg.lo_singular;
    const bool hi_sing = substitute && seg.hi_singular;
    if (lo_sing && hi_sing) {
      const double mid = 0.5 * (seg.lo + seg.hi);
      add_from(seg.lo, mid, Map::from_lo);
      add_from(seg.hi, mid, Map::from_hi);
    } else if (lo_sing) {
      add_from(seg.lo, seg.hi, Map::from_lo);
    } else if (hi_sing) {
      add_from(seg.hi, seg.lo, Map::from_hi);
    } else {
      pieces.push_back({Map::identity, 0.0, seg.lo, seg.hi});
    }
  }
  if (pieces.empty()) return LogIntegral{LogMeasure::zero(), 0.0, 0, true};

  Integrator integrator(log_f, std::move(pieces), cfg);
  LogIntegral result = integrator.run();
  for (const auto& r : remainders) {
    const double tail = endpoint_remainder(log_f, r.anchor, r.delta, r.direction, result.value.log());
    result.value = result.value + LogMeasure::from_log(tail);
  }
  return result;
}

}  // namespace radmax
