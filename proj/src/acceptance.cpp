#include "radmax/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>
#include <random>
#include <sstream>

#include "radmax/dimension_limit.hpp"
#include "radmax/error.hpp"
#include "radmax/finite.hpp"
#include "radmax/maximal.hpp"
#include "radmax/radial_geometry.hpp"
#include "radmax/weights.hpp"
#include "optimize.hpp"

namespace radmax {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!passed) detail << "; ";
      else detail.str("");
      passed = false;
      detail << what;
    }
  }
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Criterion 1.
void lebesgue_exactness(Outcome& out, Exec) {
  const auto one = RadialDensity::constant(1.0);
  double worst = 0.0;
  std::string where;
  for (int n : {2, 10, 100, 1000})
    for (double R : {0.1, 1.0, 10.0})
      for (double s : {0.0, R / 2, R, 3 * R}) {
        const double err =
            std::fabs(std::expm1(ball_measure(one, BallSpec(n, s, R)).log() - log_ball_volume(n, R).log()));
        if (err > worst) {
          worst = err;
          where = "n=" + std::to_string(n) + " s=" + g(s) + " R=" + g(R);
        }
      }
  out.detail << "worst relative error " << g(worst) << " at " << where;
  out.require(worst < 1e-9, "relative error " + g(worst) + " >= 1e-9 at " + where);
}

// Criterion 2.
void kernel_certification(Outcome& out, Exec) {
  double mass = 0.0, min_phi = 1.0, violation = -1.0, tail2000 = 0.0;
  for (int n : {10, 100, 2000})
    for (auto [s, R] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}, {0.5, 2.0}}) {
      const BallSpec spec(n, s, R);
      const auto c = approx_identity_certificate(spec, 0.1 * spec.T());
      const std::string at = " (n=" + std::to_string(n) + ", s=" + g(s) + ", R=" + g(R) + ")";
      mass = std::max(mass, c.mass_error);
      min_phi = std::min(min_phi, c.min_phi);
      if (c.double_estimate_points > 0) violation = std::max(violation, c.double_estimate_violation);
      if (n == 2000) tail2000 = std::max(tail2000, c.tail());
      out.require(c.mass_error < 1e-8, "mass error " + g(c.mass_error) + at);
      out.require(c.min_phi >= 0.0, "negative kernel value" + at);
      out.require(c.decreasing_beyond_T, "kernel increases beyond T" + at);
      out.require(c.double_estimate_violation <= 1e-9, "double estimate off by " + g(c.double_estimate_violation) + at);
      if (n == 2000) out.require(c.tail() < 1e-6, "tail mass " + g(c.tail()) + " at n=2000" + at);
    }
  if (out.passed)
    out.detail << "mass error <= " << g(mass) << ", min phi " << g(min_phi) << ", tail at n=2000 <= " << g(tail2000)
               << ", double-estimate slack " << g(violation);
}

// Criterion 3.
void differentiation_through_dimensions(Outcome& out, Exec exec) {
  const std::vector<std::pair<double, double>> balls{{0.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}};
  double worst_final = 0.0;
  for (const auto& density : {RadialDensity::power(2.0), RadialDensity::inverse_quadratic(), RadialDensity::exp_decay()}) {
    LimitExperiment exp{density, balls, geometric_schedule(), {}, {}};
    const auto table = limit_table(exp, exec);
    for (const auto& f : table.failures) out.require(false, density.name() + " " + f);
    for (const auto& r : table.rows) {
      if (r.n == exp.dimensions.back()) worst_final = std::max(worst_final, r.error);
      if (density.name() == "power(2)") {
        const double exact = r.s * r.s + r.n * r.R * r.R / (r.n + 2.0);
        const double err = std::fabs(r.average - exact);
        out.require(err < 1e-8, "t^2 identity off by " + g(err) + " at n=" + std::to_string(r.n));
      }
    }
  }
  if (out.passed) out.detail << "worst error at n=2000: " << g(worst_final) << "; t^2 identity exact";
}

// Criterion 4.
void dyadic_constants(Outcome& out, Exec) {
  const SweepGrid grid;
  double worst = 0.0;
  for (double a : {-0.5, 0.5, 1.0, 2.0}) {
    const double beta = dyadic_oscillation(RadialDensity::power(a), grid).value;
    const double err = std::fabs(beta - std::pow(2.0, std::fabs(a)));
    worst = std::max(worst, err);
    out.require(err <= 1e-6, "power(" + g(a) + "): beta " + g(beta));
  }
  const double one = dyadic_oscillation(RadialDensity::constant(1.0), grid).value;
  out.require(one == 1.0, "constant density: beta " + g(one));
  if (out.passed) out.detail << "max |beta - 2^|a|| = " << g(worst) << ", constant gives 1";
}

// Criterion 5.
void shell_counterexample_check(Outcome& out, Exec exec) {
  ShellOptions opt;
  opt.fit_min_n = 50;
  const auto r = shell_counterexample(0.5, opt, exec);
  const double cs = r.centered_fit.slope, ds = r.delta_fit.slope;
  out.detail << "centered slope " << g(cs) << ", delta slope " << g(ds) << ", limit distance " << g(r.limit_distance);
  out.require(cs >= 0.4 && cs <= 0.6, "centered slope " + g(cs) + " outside [0.4, 0.6]");
  out.require(ds >= 0.4 && ds <= 0.6, "delta slope " + g(ds) + " outside [0.4, 0.6]");
  out.require(r.limit_distance < 0.02, "limit distance " + g(r.limit_distance));
  for (std::size_t i = 0; i < r.dimensions.size(); ++i)
    out.require(r.delta_monotone[i], "M delta_0 not monotone at n=" + std::to_string(r.dimensions[i]));
}

// Criterion 6.
void micro_weak_decoupling(Outcome& out, Exec exec) {
  SweepGrid grid;
  grid.R_count = 16;
  grid.refinement_depth = 1;
  const auto shell = RadialDensity::shell(0.5);
  const std::vector<int> dims{10, 50, 100, 200, 500, 1000, 2000};
  std::vector<DoublingProfile> p;
  for (int n : dims) p.push_back(doubling_profile(shell, n, grid, {}, exec));
  const double cap = 1.2 * std::max(std::exp(1.0), p[0].micro.value);
  double k0max = 0.0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    k0max = std::max(k0max, p[i].micro.value);
    out.require(p[i].micro.value <= cap,
                "K0(" + std::to_string(dims[i]) + ") = " + g(p[i].micro.value) + " exceeds " + g(cap));
  }
  const double growth = p.back().weak.value / p[1].weak.value;
  const double need = std::pow(2000.0 / 50.0, 0.3);
  out.require(growth > need, "K1(2000)/K1(50) = " + g(growth) + " <= " + g(need));
  if (out.passed)
    out.detail << "max K0 " << g(k0max) << " <= " << g(cap) << ", K1(2000)/K1(50) = " << g(growth) << " > " << g(need);
}

// Criterion 7.
void one_dimensional_weak_type(Outcome& out, Exec exec) {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0, worst_h = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 20 + trial % 60;
    std::vector<double> nodes{0.0}, masses;
    RadialFunction F;
    for (int i = 0; i < N; ++i) {
      nodes.push_back(nodes.back() + 0.1 + U(rng));
      masses.push_back(U(rng) < 0.1 ? 0.0 : std::exp(4.0 * U(rng) - 2.0));
      F.values.push_back(U(rng) < 0.5 ? 0.0 : 10.0 * U(rng));
    }
    const auto grid = Grid1D::from_masses(nodes, masses);
    const double norm = F.l1(grid);
    if (!(norm > 0.0)) continue;
    worst = std::max(worst, weak_type_ratio(noncentered_max(F, grid, exec), grid, norm));
    worst_h = std::max(worst_h, weak_type_ratio(hardy_operator(F, grid), grid, norm));
  }
  out.detail << "non-centered " << g(worst) << ", Hardy " << g(worst_h);
  out.require(worst <= 2.0 + 1e-9, "non-centered weak ratio " + g(worst) + " > 2");
  out.require(worst_h <= 1.0 + 1e-9, "Hardy weak ratio " + g(worst_h) + " > 1");
}

// Criterion 8.
void radial_reduction(Outcome& out, Exec exec) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto lattice = Lattice::centered(2, 30, 0.1);
  // The radial profiles live inside |x| < 1; comparisons stay where no
  // relevant ball is clipped by the lattice boundary.
  constexpr double kEval = 1.0;
  std::vector<double> nodes;
  for (int i = 0; i <= 300; ++i) nodes.push_back(0.01 * i);
  auto cell_of = [&](double r) {
    return static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), r) - nodes.begin() - 1);
  };
  SweepGrid sweep;
  sweep.R_count = 24;

  double worst = 0.0;
  for (const auto& density : {RadialDensity::constant(1.0), RadialDensity::power(0.5)}) {
    const double K1 = weak_doubling_constant(density, 2, sweep).value;
    const auto mass = lattice.masses(density);
    // v is the lattice measure pushed to |x|, so both sides integrate the same atoms.
    std::vector<double> cell_mass(nodes.size() - 1, 0.0);
    for (std::size_t p = 0; p < lattice.size(); ++p) {
      const std::size_t c = cell_of(lattice.norm(p));
      if (c < cell_mass.size()) cell_mass[c] += mass[p];
    }
    const auto grid = Grid1D::from_masses(nodes, cell_mass);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> breaks{0.0}, values;
      while (breaks.back() < 0.6) breaks.push_back(std::round((breaks.back() + 0.2 + 0.2 * U(rng)) * 100.0) / 100.0);
      for (std::size_t i = 0; i + 1 < breaks.size(); ++i) values.push_back(U(rng) < 0.3 ? 0.0 : U(rng));
      auto f0 = [&](double t) {
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
          if (t >= breaks[i] && t < breaks[i + 1]) return values[i];
        return 0.0;
      };
      const auto envelope = radial_reduction_bound(RadialFunction::sample(grid, f0), grid, K1, exec);
      std::vector<double> f(lattice.size());
      for (std::size_t p = 0; p < f.size(); ++p) f[p] = f0(lattice.norm(p));
      const auto M = grid_maximal_oracle(lattice, f, mass, exec);
      for (std::size_t p = 0; p < f.size(); ++p) {
        const double r = lattice.norm(p);
        if (r > kEval) continue;
        const double env = envelope.values[cell_of(r)];
        if (M[p] > env * (1.0 + 1e-12)) {
          out.require(false, density.name() + ": M f = " + g(M[p]) + " above envelope " + g(env) + " at |x| = " + g(r));
          break;
        }
        if (env > 0.0) worst = std::max(worst, M[p] / env);
      }
    }
  }

  const auto w = RadialDensity::power(0.5);
  const double beta = dyadic_oscillation(w, SweepGrid{}).value;
  const double C = 4.0 * std::pow(beta, 4);
  const auto mu = lattice.masses(w), leb = lattice.lebesgue_masses();
  double worst_split = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(lattice.size()), fw(lattice.size());
    for (std::size_t p = 0; p < f.size(); ++p) {
      f[p] = U(rng) < 0.2 ? 5.0 * U(rng) : 0.0;
      fw[p] = f[p] * w.eval(lattice.norm(p));
    }
    const auto Mmu = grid_maximal_oracle(lattice, f, mu, exec);
    const auto M = grid_maximal_oracle(lattice, f, leb, exec);
    const auto Mw = grid_maximal_oracle(lattice, fw, leb, exec);
    const auto H = grid_hardy_oracle(lattice, f, mu);
    for (std::size_t p = 0; p < f.size(); ++p) {
      const double rhs = C * (M[p] + Mw[p] / w.eval(lattice.norm(p)) + H[p]);
      if (Mmu[p] > rhs * (1.0 + 1e-12)) {
        out.require(false, "pointwise decomposition fails at lattice point " + std::to_string(p));
        break;
      }
      if (rhs > 0.0) worst_split = std::max(worst_split, Mmu[p] / rhs);
    }
  }
  if (out.passed)
    out.detail << "max M/envelope " << g(worst) << ", max decomposition ratio " << g(worst_split) << " (C = " << g(C)
               << ")";
}

// Criterion 9.
struct InstanceCheck {
  bool certified = false;
  std::string violation;
  int windows = 0, selected = 0, equalities = 0;
  double slack = 0.0;
  std::vector<std::string> norm_failures;
};

InstanceCheck check_instance(std::uint64_t seed) {
  InstanceCheck r;
  const auto inst = random_localization_instance(seed);
  const auto K = discrete_constants(inst.space, inst.T.n());
  const auto st = run_selection(inst.space, inst.T, inst.f, inst.lambda, K.K0);
  const auto cert = certify_localization(st, inst.space, inst.T, inst.f);
  r.certified = cert.passed();
  if (!r.certified) r.violation = cert.violations.empty() ? std::string("failed") : cert.violations.front();
  r.windows = static_cast<int>(st.window_balls);
  for (const auto& b : st.balls) r.selected += b.selected;
  if (cert.headline_rhs > 0.0) r.slack = cert.headline_lhs / cert.headline_rhs;
  for (double radius : inst.T.radii()) {
    const auto s = single_radius_l1(inst.space, radius);
    if (s.norm > s.K1 * (1.0 + 1e-12)) r.norm_failures.push_back("single-radius norm " + g(s.norm) + " > K1 " + g(s.K1));
    if (std::fabs(s.norm - s.K1) <= 1e-12 * s.K1) ++r.equalities;
  }
  return r;
}

void localization_certificates(Outcome& out, Exec exec) {
  constexpr int kInstances = 100;
  std::vector<InstanceCheck> checks(kInstances);
  detail::ExceptionSlot slot;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < kInstances; ++i) slot.run([&] { checks[i] = check_instance(i + 1); });
  } else {
    for (int i = 0; i < kInstances; ++i) checks[i] = check_instance(i + 1);
  }
  slot.rethrow();

  int selected = 0, equalities = 0, windows = 0;
  double slack = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const auto& c = checks[i];
    const std::string seed = "seed " + std::to_string(i + 1) + ": ";
    if (!c.certified) out.require(false, seed + c.violation);
    for (const auto& f : c.norm_failures) out.require(false, seed + f);
    selected += c.selected;
    windows += c.windows;
    equalities += c.equalities;
    slack = std::max(slack, c.slack);
  }
  out.require(equalities > 0, "no instance attains single-radius norm = K1");
  if (out.passed)
    out.detail << windows << " window balls, " << selected << " selected, max mu(F)/bound " << g(slack) << ", "
               << equalities << " single-radius equality witnesses";
}

// Criterion 10.
void power_family_growth(Outcome& out, Exec exec) {
  PowerFamilyOptions opt;
  opt.fit_min_n = 10;
  const auto r = power_family_experiment(0.7, opt, exec);
  out.detail << "log-slope " << g(r.fit.slope) << " (a = " << g(r.fit.rate()) << "), R^2 " << g(r.fit.r_squared);
  out.require(r.fit.slope > 0.0, "non-positive log-slope " + g(r.fit.slope));
  out.require(r.fit.r_squared >= 0.98, "R^2 " + g(r.fit.r_squared) + " < 0.98");
  for (std::size_t i = 1; i < r.delta_bound.size(); ++i)
    out.require(r.delta_bound[i] > r.delta_bound[i - 1],
                "bound does not grow at n=" + std::to_string(r.dimensions[i]));
}

using Check = void (*)(Outcome&, Exec);

struct Entry {
  Criterion info;
  Check check;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> all{
      {{1, "Lebesgue exactness", 10.0}, lebesgue_exactness},
      {{2, "kernel certification", 30.0}, kernel_certification},
      {{3, "differentiation through dimensions", 0.0}, differentiation_through_dimensions},
      {{4, "dyadic constants", 0.0}, dyadic_constants},
      {{5, "shell counterexample growth", 120.0}, shell_counterexample_check},
      {{6, "micro vs weak doubling decoupling", 0.0}, micro_weak_decoupling},
      {{7, "1-D weak type (1,1)", 0.0}, one_dimensional_weak_type},
      {{8, "radial reduction and pointwise decomposition", 0.0}, radial_reduction},
      {{9, "localization certificates", 120.0}, localization_certificates},
      {{10, "power family growth", 0.0}, power_family_growth},
  };
  return all;
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list = [] {
    std::vector<Criterion> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return list;
}

CriterionResult run_criterion(int id, Exec exec) {
  for (const auto& e : entries()) {
    if (e.info.id != id) continue;
    CriterionResult r;
    r.id = id;
    r.title = e.info.title;
    r.budget_seconds = e.info.budget_seconds;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.check(out, exec);
    } catch (const std::exception& ex) {
      out.require(false, std::string("exception: ") + ex.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.budget_seconds > 0.0 && r.seconds >= r.budget_seconds)
      out.require(false, "runtime " + g(r.seconds) + " s over the " + g(r.budget_seconds) + " s budget");
    r.passed = out.passed;
    r.detail = out.detail.str();
    return r;
  }
  throw DomainError("no acceptance criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, Exec exec,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<int> todo = ids;
  if (todo.empty())
    for (const auto& c : acceptance_criteria()) todo.push_back(c.id);
  std::vector<CriterionResult> results;
  for (int id : todo) {
    results.push_back(run_criterion(id, exec));
    if (on_result) on_result(results.back());
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title + ": " + r.detail +
         " (" + secs + " s)";
}

ExperimentReport acceptance_report(const std::vector<CriterionResult>& results) {
  ExperimentReport rep("verify", {"id", "criterion", "passed", "detail"});
  int passed = 0;
  Json timings = Json::object();
  for (const auto& r : results) {
    passed += r.passed;
    rep.add_row({static_cast<long long>(r.id), r.title, r.passed, r.detail});
    timings[std::to_string(r.id)] = r.seconds;
  }
  // Timings vary between runs, so they stay out of the CSV.
  rep.provenance()["seconds"] = timings;
  rep.parameters()["criteria"] = static_cast<long long>(results.size());
  rep.parameters()["passed"] = passed;
  return rep;
}

}  // namespace radmax
