#include "radmax/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "optimize.hpp"
#include "radmax/error.hpp"
#include "radmax/radial_geometry.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace radmax {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

void require_match(const RadialFunction& F, const Grid1D& grid) {
  if (F.values.size() != grid.cells())
    throw DomainError("function has " + std::to_string(F.values.size()) + " cells, grid has " +
                      std::to_string(grid.cells()));
}

// Best average over ranges [i, j], j >= k, accumulated into best[k] for k >= i.
void scan_left_endpoint(std::size_t i, const std::vector<double>& F, const std::vector<double>& m,
                        std::vector<double>& avg, std::vector<double>& best) {
  const std::size_t N = m.size();
  double s = 0.0, w = 0.0;
  for (std::size_t j = i; j < N; ++j) {
    s += std::fabs(F[j]) * m[j];
    w += m[j];
    avg[j] = w > 0.0 ? s / w : kNegInf;
  }
  double suffix = kNegInf;
  for (std::size_t j = N; j-- > i;) {
    suffix = std::max(suffix, avg[j]);
    best[j] = std::max(best[j], suffix);
  }
}

}  // namespace

std::vector<double> Grid1D::default_nodes(int count, double lo, double hi) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) throw DomainError("default_nodes: bad range");
  std::vector<double> nodes{0.0};
  for (int i = 0; i < count; ++i)
    nodes.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  nodes.back() = hi;
  return nodes;
}

Grid1D Grid1D::lebesgue(std::vector<double> nodes) {
  Grid1D g;
  g.nodes = std::move(nodes);
  for (std::size_t i = 0; i + 1 < g.nodes.size(); ++i) g.mass.push_back(g.nodes[i + 1] - g.nodes[i]);
  g.validate();
  return g;
}

Grid1D Grid1D::weighted(const RadialDensity& density, int n, std::vector<double> nodes,
                        const QuadratureConfig& q, Exec exec) {
  Grid1D g;
  g.nodes = std::move(nodes);
  if (g.nodes.size() < 2) throw DomainError("Grid1D needs at least two nodes");
  const std::size_t N = g.nodes.size() - 1;
  std::vector<double> log_mass(N);
  detail::ExceptionSlot slot;
  auto cell = [&](std::size_t i) {
    log_mass[i] = radial_moment(density, n, g.nodes[i], g.nodes[i + 1], q).log();
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < N; ++i) slot.run([&] { cell(i); });
  } else {
    for (std::size_t i = 0; i < N; ++i) cell(i);
  }
  slot.rethrow();
  g.log_scale = *std::max_element(log_mass.begin(), log_mass.end());
  if (!std::isfinite(g.log_scale)) throw DomainError("Grid1D: weight has no finite positive mass");
  g.mass.resize(N);
  for (std::size_t i = 0; i < N; ++i) g.mass[i] = std::exp(log_mass[i] - g.log_scale);
  g.validate();
  return g;
}

Grid1D Grid1D::from_masses(std::vector<double> nodes, std::vector<double> masses) {
  Grid1D g;
  g.nodes = std::move(nodes);
  g.mass = std::move(masses);
  g.validate();
  return g;
}

double Grid1D::total_mass() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

void Grid1D::validate() const {
  if (nodes.size() < 2 || mass.size() + 1 != nodes.size())
    throw DomainError("Grid1D: need N+1 nodes for N cell masses");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i + 1] > nodes[i])) throw DomainError("Grid1D: nodes must increase strictly");
  for (double m : mass)
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("Grid1D: masses must be finite and >= 0");
}

RadialFunction RadialFunction::sample(const Grid1D& grid, const std::function<double(double)>& f0) {
  RadialFunction F;
  F.values.reserve(grid.cells());
  for (std::size_t i = 0; i < grid.cells(); ++i)
    F.values.push_back(f0(0.5 * (grid.nodes[i] + grid.nodes[i + 1])));
  return F;
}

double RadialFunction::l1(const Grid1D& grid) const {
  require_match(*this, grid);
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += std::fabs(values[i]) * grid.mass[i];
  return s;
}

RadialFunction noncentered_max(const RadialFunction& F, const Grid1D& grid, Exec exec) {
  require_match(F, grid);
  const std::size_t N = grid.cells();
  RadialFunction out;
  out.values.assign(N, kNegInf);
  if (exec == Exec::serial) {
    std::vector<double> avg(N);
    for (std::size_t i = 0; i < N; ++i) scan_left_endpoint(i, F.values, grid.mass, avg, out.values);
  } else {
    const int threads = max_threads();
    std::vector<std::vector<double>> best(threads, std::vector<double>(N, kNegInf));
#pragma omp parallel
    {
      std::vector<double> avg(N);
      auto& mine = best[thread_id()];
#pragma omp for schedule(dynamic, 8)
      for (std::size_t i = 0; i < N; ++i) scan_left_endpoint(i, F.values, grid.mass, avg, mine);
    }
    for (const auto& b : best)
      for (std::size_t k = 0; k < N; ++k) out.values[k] = std::max(out.values[k], b[k]);
  }
  for (double& v : out.values)
    if (v == kNegInf) v = 0.0;
  return out;
}

RadialFunction noncentered_max_naive(const RadialFunction& F, const Grid1D& grid) {
  require_match(F, grid);
  const std::size_t N = grid.cells();
  RadialFunction out;
  out.values.assign(N, 0.0);
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t i = 0; i <= k; ++i)
      for (std::size_t j = k; j < N; ++j) {
        double s = 0.0, w = 0.0;
        for (std::size_t c = i; c <= j; ++c) {
          s += std::fabs(F.values[c]) * grid.mass[c];
          w += grid.mass[c];
        }
        if (w > 0.0) out.values[k] = std::max(out.values[k], s / w);
      }
  return out;
}

std::vector<double> cell_max_at_nodes(const RadialFunction& cell_values) {
  const auto& v = cell_values.values;
  std::vector<double> out(v.size() + 1, 0.0);
  for (std::size_t k = 0; k <= v.size(); ++k) {
    if (k > 0) out[k] = std::max(out[k], v[k - 1]);
    if (k < v.size()) out[k] = std::max(out[k], v[k]);
  }
  return out;
}

std::vector<double> one_sided_max(const RadialFunction& F, Side side, const Grid1D& grid) {
  require_match(F, grid);
  const auto& t = grid.nodes;
  const std::size_t nodes = t.size();
  std::vector<double> out(nodes, 0.0);
  for (std::size_t k = 0; k < nodes; ++k) {
    double integral = 0.0;
    if (side == Side::right) {
      for (std::size_t j = k + 1; j < nodes; ++j) {
        integral += std::fabs(F.values[j - 1]) * (t[j] - t[j - 1]);
        out[k] = std::max(out[k], integral / (t[j] - t[k]));
      }
    } else {
      for (std::size_t j = k; j-- > 0;) {
        integral += std::fabs(F.values[j]) * (t[j + 1] - t[j]);
        out[k] = std::max(out[k], integral / (t[k] - t[j]));
      }
    }
  }
  return out;
}

std::vector<double> hardy_operator_nodes(const RadialFunction& f, const Grid1D& grid) {
  require_match(f, grid);
  const std::size_t N = grid.cells();
  std::vector<double> ball_avg(N + 1, kNegInf);
  double s = 0.0, w = 0.0;
  for (std::size_t j = 1; j <= N; ++j) {
    s += std::fabs(f.values[j - 1]) * grid.mass[j - 1];
    w += grid.mass[j - 1];
    if (w > 0.0) ball_avg[j] = s / w;
  }
  std::vector<double> out(N + 1, 0.0);
  double suffix = kNegInf;
  for (std::size_t k = N + 1; k-- > 0;) {
    suffix = std::max(suffix, ball_avg[k]);
    out[k] = suffix == kNegInf ? 0.0 : suffix;
  }
  return out;
}

RadialFunction hardy_operator(const RadialFunction& f, const Grid1D& grid) {
  const auto nodes = hardy_operator_nodes(f, grid);
  return RadialFunction{std::vector<double>(nodes.begin() + 1, nodes.end())};
}

double weak_type_ratio(const RadialFunction& op, const Grid1D& grid, double norm) {
  require_match(op, grid);
  if (!(norm > 0.0)) return 0.0;
  std::vector<std::size_t> order(op.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return op.values[a] > op.values[b]; });
  double level_mass = 0.0, best = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    level_mass += grid.mass[order[r]];
    const double value = op.values[order[r]];
    const bool last_of_value = r + 1 == order.size() || op.values[order[r + 1]] < value;
    if (last_of_value) best = std::max(best, value * level_mass);
  }
  return best / norm;
}

RadialFunction radial_reduction_bound(const RadialFunction& f0, const Grid1D& grid, double K1,
                                      Exec exec) {
  auto out = noncentered_max(f0, grid, exec);
  for (double& v : out.values) v *= 1.0 + K1;
  return out;
}

LogMeasure delta_maximal(const RadialDensity& density, int n, double x_norm,
                         const QuadratureConfig& q) {
  if (!(x_norm > 0.0)) throw DomainError("delta_maximal: |x| must be positive");
  try {
    return LogMeasure::one() / ball_measure(density, BallSpec(n, x_norm, x_norm), q);
  } catch (const DivergenceError&) {
    return LogMeasure::zero();
  }
}

DeltaBound delta_lower_bound(const RadialDensity& density, int n, const std::vector<double>& mesh,
                             const QuadratureConfig& q, Exec exec) {
  if (mesh.empty()) throw DomainError("delta_lower_bound: empty mesh");
  DeltaBound out;
  out.mesh = mesh;
  std::sort(out.mesh.begin(), out.mesh.end());
  const std::size_t M = out.mesh.size();
  std::vector<double> centered(M), shifted(M);
  detail::ExceptionSlot slot;
  auto cell = [&](std::size_t i) {
    const double s = out.mesh[i];
    centered[i] = ball_measure(density, BallSpec(n, 0.0, s), q).log();
    shifted[i] = ball_measure(density, BallSpec(n, s, s), q).log();
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < M; ++i) slot.run([&] { cell(i); });
  } else {
    for (std::size_t i = 0; i < M; ++i) cell(i);
  }
  slot.rethrow();

  double best = kNegInf;
  out.log_ratio.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    out.log_ratio[i] = centered[i] - shifted[i];
    if (i > 0 && shifted[i] < shifted[i - 1] - 1e-12 * std::max(1.0, std::fabs(shifted[i - 1])))
      out.monotone = false;
    if (out.log_ratio[i] > best) {
      best = out.log_ratio[i];
      out.estimate.witness.n = n;
      out.estimate.witness.s = out.mesh[i];
      out.estimate.witness.R = out.mesh[i];
    }
  }
  out.estimate.value = std::exp(best);
  out.estimate.grid = std::to_string(M) + " level radii in [" + std::to_string(out.mesh.front()) +
                      ", " + std::to_string(out.mesh.back()) + "]";
  out.estimate.note = out.monotone ? "mu(B_s) / mu(B(s e, s)); M delta_0 radially nonincreasing"
                                   : "heuristic: M delta_0 not monotone on the mesh";
  return out;
}

namespace {

// Lattice points are stored in half-step units: odd integers a, b with
// p = (a h / 2, b h / 2), so squared distances compare exactly.
struct HalfSteps {
  std::vector<std::array<long long, 2>> coords;
};

HalfSteps half_steps(const Lattice& lattice) {
  HalfSteps hs;
  hs.coords.reserve(lattice.size());
  for (const auto& p : lattice.points)
    hs.coords.push_back({std::llround(2.0 * p[0] / lattice.h), std::llround(2.0 * p[1] / lattice.h)});
  return hs;
}

// For one center: every point x gets the best ball average among balls
// around the center that contain x.
void scan_center(const std::array<long long, 2>& c, const HalfSteps& hs,
                 const std::vector<double>& f, const std::vector<double>& mass,
                 std::vector<long long>& d2, std::vector<std::size_t>& order,
                 std::vector<double>& group_best) {
  const std::size_t P = hs.coords.size();
  for (std::size_t p = 0; p < P; ++p) {
    const long long dx = hs.coords[p][0] - c[0], dy = hs.coords[p][1] - c[1];
    d2[p] = dx * dx + dy * dy;
  }
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return d2[a] != d2[b] ? d2[a] < d2[b] : a < b;
  });
  double s = 0.0, w = 0.0;
  std::size_t r = 0;
  while (r < P) {
    std::size_t e = r;
    while (e < P && d2[order[e]] == d2[order[r]]) {
      s += std::fabs(f[order[e]]) * mass[order[e]];
      w += mass[order[e]];
      ++e;
    }
    const double avg = w > 0.0 ? s / w : kNegInf;
    for (std::size_t k = r; k < e; ++k) group_best[k] = avg;
    r = e;
  }
}

// Every ball around the origin that contains a point: suffix maxima over the
// distance groups.
void spread_to_members(const std::vector<std::size_t>& order, const std::vector<double>& group_best,
                       std::vector<double>& best) {
  double suffix = kNegInf;
  for (std::size_t k = order.size(); k-- > 0;) {
    suffix = std::max(suffix, group_best[k]);
    best[order[k]] = std::max(best[order[k]], suffix);
  }
}

void check_inputs(const Lattice& lattice, const std::vector<double>& f,
                  const std::vector<double>& mass) {
  if (f.size() != lattice.size() || mass.size() != lattice.size())
    throw DomainError("lattice function and mass sizes must match the lattice");
}

}  // namespace

Lattice Lattice::centered(int dim, int per_side, double h) {
  if (dim < 1 || dim > 2) throw DomainError("grid oracle supports dimension 1 or 2 only");
  if (per_side < 2 || per_side % 2 != 0) throw DomainError("Lattice: per_side must be even and >= 2");
  if (!(h > 0.0)) throw DomainError("Lattice: spacing must be positive");
  Lattice L;
  L.dim = dim;
  L.h = h;
  auto coord = [&](int i) { return (i + 0.5 - per_side / 2) * h; };
  if (dim == 1) {
    for (int i = 0; i < per_side; ++i) L.points.push_back({coord(i), 0.0});
  } else {
    for (int i = 0; i < per_side; ++i)
      for (int j = 0; j < per_side; ++j) L.points.push_back({coord(i), coord(j)});
  }
  return L;
}

double Lattice::norm(std::size_t i) const { return std::hypot(points[i][0], points[i][1]); }

std::vector<double> Lattice::masses(const RadialDensity& density) const {
  const double cell = std::pow(h, dim);
  std::vector<double> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = density.eval(norm(i)) * cell;
  return m;
}

std::vector<double> Lattice::lebesgue_masses() const {
  return std::vector<double>(size(), std::pow(h, dim));
}

std::vector<double> grid_maximal_oracle(const Lattice& lattice, const std::vector<double>& f,
                                        const std::vector<double>& mass, Exec exec) {
  check_inputs(lattice, f, mass);
  const auto hs = half_steps(lattice);
  const std::size_t P = lattice.size();
  std::vector<double> out(P, 0.0);
  auto run = [&](std::size_t c, std::vector<long long>& d2, std::vector<std::size_t>& order,
                 std::vector<double>& group_best) {
    scan_center(hs.coords[c], hs, f, mass, d2, order, group_best);
    const double best = *std::max_element(group_best.begin(), group_best.end());
    out[c] = best == kNegInf ? 0.0 : best;
  };
  if (exec == Exec::serial) {
    std::vector<long long> d2(P);
    std::vector<std::size_t> order(P);
    std::vector<double> group_best(P);
    for (std::size_t c = 0; c < P; ++c) run(c, d2, order, group_best);
  } else {
#pragma omp parallel
    {
      std::vector<long long> d2(P);
      std::vector<std::size_t> order(P);
      std::vector<double> group_best(P);
#pragma omp for schedule(dynamic, 4)
      for (std::size_t c = 0; c < P; ++c) run(c, d2, order, group_best);
    }
  }
  return out;
}

std::vector<double> grid_hardy_oracle(const Lattice& lattice, const std::vector<double>& f,
                                      const std::vector<double>& mass) {
  check_inputs(lattice, f, mass);
  const auto hs = half_steps(lattice);
  const std::size_t P = lattice.size();
  std::vector<long long> d2(P);
  std::vector<std::size_t> order(P);
  std::vector<double> group_best(P), out(P, kNegInf);
  scan_center({0, 0}, hs, f, mass, d2, order, group_best);
  spread_to_members(order, group_best, out);
  for (double& v : out)
    if (v == kNegInf) v = 0.0;
  return out;
}

}  // namespace radmax
