// radmax: experiment runner for radial-density maximal operators.
//
//   radmax ball-measure --density "shell(0.5)" --n 100 --s 1 --R 1
//   radmax counterexample --alpha 0.5 --n-max 2000
//   radmax --config runs/shell.toml counterexample --fit-min-n 100
//   radmax verify
//
// Exit codes: 0 success, 2 configuration, 3 numeric divergence, 4 failed
// certificate.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "radmax/acceptance.hpp"
#include "radmax/dimension_limit.hpp"
#include "radmax/error.hpp"
#include "radmax/expression.hpp"
#include "radmax/finite.hpp"
#include "radmax/maximal.hpp"
#include "radmax/radial_geometry.hpp"
#include "radmax/weights.hpp"

using namespace radmax;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kDivergence = 3;
constexpr int kCertificate = 4;

struct Common {
  std::string out_dir = "reports";
  std::string stamp;
  bool serial = false;
  bool no_write = false;
  bool print_csv = false;
  double rel_tol = 1e-9;

  Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
  QuadratureConfig quadrature() const {
    QuadratureConfig q;
    q.rel_tol = rel_tol;
    q.validate();
    return q;
  }
};

struct GridFlags {
  double R_min = 1e-2, R_max = 1e2;
  int R_count = 32;
  int refine = 2;
  std::vector<double> multipliers = SweepGrid::default_multipliers();

  void add(CLI::App* sub) {
    sub->add_option("--R-min", R_min, "Smallest sweep radius")->capture_default_str();
    sub->add_option("--R-max", R_max, "Largest sweep radius")->capture_default_str();
    sub->add_option("--R-count", R_count, "Log-spaced radii in the sweep")->capture_default_str();
    sub->add_option("--refine", refine, "Golden-section refinement depth")->capture_default_str();
    sub->add_option("--multipliers", multipliers, "Center distances s/R")->delimiter(',');
  }
  SweepGrid grid() const {
    SweepGrid g;
    g.R_min = R_min;
    g.R_max = R_max;
    g.R_count = R_count;
    g.refinement_depth = refine;
    g.center_multipliers = multipliers;
    g.validate();
    return g;
  }
};

std::string utc_stamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

void emit(const ExperimentReport& rep, const Common& c) {
  if (c.print_csv) std::cout << rep.to_csv();
  if (c.no_write) return;
  const auto [csv, json] = rep.write(c.out_dir, c.stamp.empty() ? utc_stamp() : c.stamp);
  std::cerr << "wrote " << csv.string() << " and " << json.string() << "\n";
}

std::string fmt(double v) { return format_double(v); }

std::vector<int> dims_up_to(std::vector<int> dims, int n_max) {
  std::vector<int> out;
  for (int n : dims)
    if (n < n_max) out.push_back(n);
  out.push_back(n_max);
  return out;
}

// ---------------------------------------------------------------------------

struct BallMeasureCmd {
  std::string density = "1";
  int n = 2;
  double s = 0.0, R = 1.0;
  bool mc = false;

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("ball-measure", "Measure of one ball B(z, R) with |z| = s");
    sub->add_option("--density", density, "Density expression")->capture_default_str();
    sub->add_option("--n", n, "Dimension")->capture_default_str();
    sub->add_option("--s", s, "Distance of the center from the origin")->capture_default_str();
    sub->add_option("--R", R, "Radius")->capture_default_str();
    sub->add_flag("--mc", mc, "Add a Monte Carlo cross-check (2 <= n <= 10)");
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    const auto w = parse_density(density).density(n);
    const auto q = c.quadrature();
    const BallSpec spec(n, s, R);
    std::vector<std::string> cols{"n", "s", "R", "T", "log_measure", "measure", "log_lebesgue", "average"};
    if (mc) cols.insert(cols.end(), {"mc_estimate", "mc_std_error"});
    ExperimentReport rep("ball-measure", cols);
    rep.parameters()["density"] = w.name();
    rep.provenance()["quadrature"] = quadrature_provenance(q);
    const auto m = ball_measure(w, spec, q);
    const auto leb = log_ball_volume(n, R);
    std::vector<ExperimentReport::Cell> row{static_cast<long long>(n), s, R, spec.T(), m.log(), m.value(), leb.log(),
                                            std::exp(m.log() - leb.log())};
    if (mc) {
      const auto e = mc_ball_measure(w, spec, q);
      row.emplace_back(e.estimate);
      row.emplace_back(e.std_error);
    }
    rep.add_row(row);
    std::cout << "log mu(B) = " << fmt(m.log()) << "   average = " << fmt(std::exp(m.log() - leb.log())) << "\n";
    emit(rep, c);
    return kOk;
  }
};

struct ConstantsCmd {
  std::string density = "power(0.5)";
  std::vector<int> dims{2, 4, 8, 16, 32};
  std::vector<double> ps{2.0};
  GridFlags grid;

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("constants", "beta, K0, K1, K, A_p and A_1 against the dimension");
    sub->add_option("--density", density, "Density expression")->capture_default_str();
    sub->add_option("--dims", dims, "Dimensions")->delimiter(',');
    sub->add_option("--p", ps, "Exponents for A_p")->delimiter(',');
    grid.add(sub);
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    const auto expr = parse_density(density);
    const auto q = c.quadrature();
    const auto g = grid.grid();
    std::vector<std::string> cols{"n", "beta", "K0", "K1", "K"};
    for (double p : ps) cols.push_back("A_p=" + fmt(p));
    cols.insert(cols.end(), {"A_1", "hardy_ratio", "hardy_bound", "hardy_applicable", "hardy_holds"});
    ExperimentReport rep("constants", cols);
    rep.parameters()["density"] = expr.print();
    rep.parameters()["dimensions"] = dims;
    rep.parameters()["p"] = ps;
    rep.provenance()["quadrature"] = quadrature_provenance(q);
    rep.provenance()["sweep_grid"] = g.describe();
    bool ok = true;
    for (int n : dims) {
      const auto w = expr.density(n);
      const double beta = dyadic_oscillation(w, g).value;
      const auto d = doubling_profile(w, n, g, q, c.exec());
      std::vector<ExperimentReport::Cell> row{static_cast<long long>(n), beta, d.micro.value, d.weak.value,
                                              d.strong.value};
      for (double p : ps) row.emplace_back(ap_constant(w, n, p, g, q, c.exec()).value);
      row.emplace_back(a1_constant(w, n, g, q, c.exec()).value);
      const auto h = hardy_upper_check(w, n, g, q);
      row.emplace_back(h.worst_ratio);
      row.emplace_back(2.0 * h.beta);
      row.emplace_back(h.applicable);
      row.emplace_back(h.holds);
      rep.add_row(row);
      ok = ok && h.holds && d.strong.value <= d.micro.value * d.weak.value * (1.0 + 1e-12);
      std::cout << "n=" << n << "  K0=" << fmt(d.micro.value) << "  K1=" << fmt(d.weak.value)
                << "  K=" << fmt(d.strong.value) << "\n";
    }
    emit(rep, c);
    return ok ? kOk : kCertificate;
  }
};

struct LimitCmd {
  std::string density = "t^2";
  std::vector<std::string> balls{"0:1", "1:1", "3:1"};
  std::vector<int> dims = geometric_schedule();
  double tol = 1e-2;

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("limit", "Ball averages against w0(T) as the dimension grows");
    sub->add_option("--density", density, "Density expression")->capture_default_str();
    sub->add_option("--ball", balls, "Ball as s:R (repeatable)");
    sub->add_option("--dims", dims, "Dimension schedule")->delimiter(',');
    sub->add_option("--tol", tol, "Tolerance at the last dimension")->capture_default_str();
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    const auto expr = parse_density(density);
    if (expr.depends_on_dimension()) throw ConfigError("limit: the density may not depend on n");
    LimitExperiment exp{expr.density(), {}, {}, {}, {}};
    for (const auto& b : balls) {
      const auto colon = b.find(':');
      if (colon == std::string::npos) throw ConfigError("ball '" + b + "' is not of the form s:R");
      try {
        exp.balls.emplace_back(std::stod(b.substr(0, colon)), std::stod(b.substr(colon + 1)));
      } catch (const std::exception&) {
        throw ConfigError("ball '" + b + "' is not of the form s:R");
      }
    }
    exp.dimensions = dims;
    exp.tolerances.assign(dims.size(), tol);
    exp.q = c.quadrature();
    const auto t = limit_table(exp, c.exec());
    for (const auto& f : t.failures) std::cout << "failed: " << f << "\n";
    std::cout << (t.passed ? "limit table passed" : "limit table FAILED") << "\n";
    emit(t.report, c);
    return t.passed ? kOk : kCertificate;
  }
};

struct CounterexampleCmd {
  double alpha = 0.5;
  int n_max = 2000;
  std::vector<int> dims;
  double fit_min_n = 50;
  bool doubling = false;
  GridFlags grid;

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("counterexample", "Shell density |1 - t|^(-alpha): growth with n");
    sub->add_option("--alpha", alpha, "Shell exponent in (0, 1)")->capture_default_str();
    sub->add_option("--n-max", n_max, "Largest dimension")->capture_default_str();
    sub->add_option("--dims", dims, "Dimensions (overrides --n-max)")->delimiter(',');
    sub->add_option("--fit-min-n", fit_min_n, "Smallest dimension in the growth fit")->capture_default_str();
    sub->add_flag("--doubling", doubling, "Also sweep K0, K1 and K");
    grid.R_count = 16;
    grid.refine = 1;
    grid.add(sub);
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    ShellOptions opt;
    opt.dimensions = dims.empty() ? dims_up_to(opt.dimensions, n_max) : dims;
    opt.fit_min_n = fit_min_n;
    opt.q = c.quadrature();
    if (doubling) opt.doubling_grid = grid.grid();
    const auto r = shell_counterexample(alpha, opt, c.exec());
    std::cout << "centered growth exponent " << fmt(r.centered_fit.slope) << " (95% band " << fmt(r.centered_fit.band_lo)
              << " .. " << fmt(r.centered_fit.band_hi) << ", R^2 " << fmt(r.centered_fit.r_squared) << ")\n"
              << "delta bound exponent " << fmt(r.delta_fit.slope) << "\n"
              << "|shifted ratio - limit| at n=" << r.dimensions.back() << ": " << fmt(r.limit_distance) << "\n";
    emit(r.report, c);
    for (bool m : r.delta_monotone)
      if (!m) return kCertificate;
    return kOk;
  }
};

struct PowerFamilyCmd {
  double alpha = 0.7;
  std::vector<int> dims = PowerFamilyOptions{}.dimensions;
  double fit_min_n = 10;

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("power-family", "Delta lower bound for t^(-alpha n) against n");
    sub->add_option("--alpha", alpha, "Exponent, alpha < 1")->capture_default_str();
    sub->add_option("--dims", dims, "Dimensions")->delimiter(',');
    sub->add_option("--fit-min-n", fit_min_n, "Smallest dimension in the fit")->capture_default_str();
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    PowerFamilyOptions opt;
    opt.dimensions = dims;
    opt.fit_min_n = fit_min_n;
    opt.q = c.quadrature();
    const auto r = power_family_experiment(alpha, opt, c.exec());
    std::cout << "per-dimension log-slope " << fmt(r.fit.slope) << " (a = " << fmt(r.fit.rate()) << ", R^2 "
              << fmt(r.fit.r_squared) << ")\n";
    emit(r.report, c);
    for (bool m : r.delta_monotone)
      if (!m) return kCertificate;
    return kOk;
  }
};

struct MaximalCmd {
  std::string density = "1";
  int n = 10;
  int nodes = 1024;
  double lo = 1e-4, hi = 1e2;
  int trials = 20;
  std::uint64_t seed = 1;
  std::vector<double> delta_mesh{0.5, 1.0, 2.0};

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("maximal", "1-D maximal operators and weak-norm probes");
    sub->add_option("--density", density, "Density expression")->capture_default_str();
    sub->add_option("--n", n, "Dimension")->capture_default_str();
    sub->add_option("--nodes", nodes, "Log-spaced grid nodes")->capture_default_str();
    sub->add_option("--lo", lo, "First positive node")->capture_default_str();
    sub->add_option("--hi", hi, "Last node")->capture_default_str();
    sub->add_option("--trials", trials, "Random step functions")->capture_default_str();
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    sub->add_option("--delta-mesh", delta_mesh, "Level radii for the delta lower bound")->delimiter(',');
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    if (trials < 1) throw ConfigError("maximal: --trials must be positive");
    const auto w = parse_density(density).density(n);
    const auto q = c.quadrature();
    const auto grid = Grid1D::weighted(w, n, Grid1D::default_nodes(nodes, lo, hi), q, c.exec());
    ExperimentReport rep("maximal", {"trial", "support_lo", "support_hi", "l1_norm_scaled", "noncentered_weak", "hardy_weak",
                                     "noncentered_sup", "hardy_sup"});
    rep.parameters()["density"] = w.name();
    rep.parameters()["n"] = n;
    rep.parameters()["seed"] = seed;
    rep.provenance()["grid"] = {{"nodes", nodes}, {"lo", lo}, {"hi", hi}, {"log_scale", grid.log_scale}};
    rep.provenance()["quadrature"] = quadrature_provenance(q);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::size_t N = grid.cells();
    bool ok = true;
    for (int trial = 0; trial < trials; ++trial) {
      std::size_t a = rng() % N, b = rng() % N;
      if (a > b) std::swap(a, b);
      RadialFunction F;
      F.values.assign(N, 0.0);
      double level = U(rng);
      for (std::size_t i = a; i <= b; ++i) {
        if (U(rng) < 0.05) level = U(rng);
        F.values[i] = level;
      }
      const double norm = F.l1(grid);
      if (!(norm > 0.0)) F.values[a] = 1.0;
      const double l1 = F.l1(grid);
      const auto M = noncentered_max(F, grid, c.exec());
      const auto H = hardy_operator(F, grid);
      const double wm = weak_type_ratio(M, grid, l1), wh = weak_type_ratio(H, grid, l1);
      ok = ok && wm <= 2.0 + 1e-9 && wh <= 1.0 + 1e-9;
      rep.add_row({static_cast<long long>(trial), grid.nodes[a], grid.nodes[b + 1], l1, wm, wh,
                   *std::max_element(M.values.begin(), M.values.end()),
                   *std::max_element(H.values.begin(), H.values.end())});
    }
    const auto d = delta_lower_bound(w, n, delta_mesh, q, c.exec());
    rep.parameters()["delta_lower_bound"] = d.estimate.value;
    rep.parameters()["delta_monotone"] = d.monotone;
    std::cout << "weak ratios within bounds: " << (ok ? "yes" : "NO") << "\n"
              << "delta lower bound " << fmt(d.estimate.value) << (d.monotone ? "" : " (heuristic)") << "\n";
    emit(rep, c);
    return ok ? kOk : kCertificate;
  }
};

struct LocalizeCmd {
  std::string space_file;
  std::vector<double> radii;
  double block_n = 2.0;
  std::vector<double> f;
  double lambda = 0.0;
  std::uint64_t seed = 1;
  int instances = 1;
  int probe_trials = 0;
  std::vector<int> scaling_dims;
  int scaling_side = 4;

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("localize", "Finite-space selection and localization certificates");
    sub->add_option("--space", space_file, "Space JSON (points, distances, weights)");
    sub->add_option("--radii", radii, "Time set T")->delimiter(',');
    sub->add_option("--block-n", block_n, "Block parameter n > 1")->capture_default_str();
    sub->add_option("--f", f, "Function values, one per point")->delimiter(',');
    sub->add_option("--lambda", lambda, "Level");
    sub->add_option("--seed", seed, "First random instance (without --space)")->capture_default_str();
    sub->add_option("--instances", instances, "Number of random instances")->capture_default_str();
    sub->add_option("--probe-trials", probe_trials, "Random trials in the weak-norm probe")->capture_default_str();
    sub->add_option("--scaling-dims", scaling_dims, "Report the weak-norm probe on lattices {0..side-1}^d")
        ->delimiter(',');
    sub->add_option("--scaling-side", scaling_side, "Lattice side for --scaling-dims")->capture_default_str();
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    if (!scaling_dims.empty()) return run_scaling(c);
    return space_file.empty() ? run_random(c) : run_file(c);
  }

  // Report only: the probe is a lower bound, the n log n curve an upper one.
  int run_scaling(const Common& c) {
    ExperimentReport rep("localize-scaling", {"dim", "points", "n", "radii", "probe", "n_log_n"});
    rep.parameters()["side"] = scaling_side;
    rep.parameters()["probe_trials"] = probe_trials;
    rep.parameters()["seed"] = seed;
    for (int d : scaling_dims) {
      const auto space = FiniteMetricMeasureSpace::lattice(d, scaling_side);
      const double n = std::max(2, d);
      const double diameter = space.distinct_distances().back();
      std::vector<double> T;
      for (double r = 1.0; r <= n * diameter; r *= n) T.push_back(r * 1.0000001);
      const auto p = weak_norm_probe(space, T, probe_trials, seed);
      rep.add_row({static_cast<long long>(d), static_cast<long long>(space.size()), n,
                   static_cast<long long>(T.size()), p.value(), n * std::log(n)});
      std::cout << "d=" << d << "  probe " << fmt(p.value()) << "\n";
    }
    emit(rep, c);
    return kOk;
  }

  int run_file(const Common& c) {
    const auto space = FiniteMetricMeasureSpace::load(space_file);
    if (radii.empty()) throw ConfigError("localize: --radii is required with --space");
    if (f.size() != space.size())
      throw ConfigError("localize: --f needs " + std::to_string(space.size()) + " values");
    if (!(lambda > 0.0)) throw ConfigError("localize: --lambda must be positive");
    const TimeSet T(radii, block_n);
    const auto K = discrete_constants(space, block_n);
    const auto st = run_selection(space, T, f, lambda, K.K0);
    const auto cert = certify_localization(st, space, T, f);

    ExperimentReport rep("localize", {"center", "R", "R_tilde", "block", "mass", "D_mass", "selected", "absorbed",
                                      "set_index"});
    rep.parameters()["space"] = space_file;
    rep.parameters()["radii"] = radii;
    rep.parameters()["block_n"] = block_n;
    rep.parameters()["lambda"] = lambda;
    rep.parameters()["f"] = f;
    add_summary(rep, K, st, cert);
    if (probe_trials > 0) {
      const auto p = weak_norm_probe(space, radii, probe_trials, seed);
      rep.parameters()["weak_norm_lower_bound"] = p.value();
    }
    for (const auto& b : st.balls)
      rep.add_row({space.labels()[b.center], b.R, b.R_tilde, static_cast<long long>(b.block), b.mass, b.D_mass,
                   b.selected, b.absorbed, static_cast<long long>(b.selection_index + 1)});
    for (const auto& v : cert.violations) std::cout << "violation: " << v << "\n";
    std::cout << "certificate " << (cert.passed() ? "passed" : "FAILED") << "\n";
    emit(rep, c);
    return cert.passed() ? kOk : kCertificate;
  }

  int run_random(const Common& c) {
    if (instances < 1) throw ConfigError("localize: --instances must be positive");
    ExperimentReport rep("localize", {"seed", "points", "radii", "block_n", "lambda", "K0", "window_balls",
                                      "selected", "blocks", "claim_lhs", "claim_rhs", "headline_lhs",
                                      "headline_rhs", "weak_norm_lower_bound", "passed"});
    rep.parameters()["first_seed"] = seed;
    rep.parameters()["instances"] = instances;
    rep.parameters()["probe_trials"] = probe_trials;
    int failed = 0;
    for (int i = 0; i < instances; ++i) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
      const auto inst = random_localization_instance(s);
      const auto K = discrete_constants(inst.space, inst.T.n());
      const auto st = run_selection(inst.space, inst.T, inst.f, inst.lambda, K.K0);
      const auto cert = certify_localization(st, inst.space, inst.T, inst.f);
      long long selected = 0;
      for (const auto& b : st.balls) selected += b.selected;
      const double probe = weak_norm_probe(inst.space, inst.T.radii(), probe_trials, s).value();
      failed += !cert.passed();
      for (const auto& v : cert.violations) std::cout << "seed " << s << " violation: " << v << "\n";
      rep.add_row({static_cast<long long>(s), static_cast<long long>(inst.space.size()),
                   static_cast<long long>(inst.T.radii().size()), inst.T.n(), inst.lambda, K.K0,
                   static_cast<long long>(st.window_balls), selected,
                   static_cast<long long>(st.selected_blocks.size()), cert.claim_lhs, cert.claim_rhs,
                   cert.headline_lhs, cert.headline_rhs, probe, cert.passed()});
    }
    std::cout << instances - failed << "/" << instances << " instances certified\n";
    emit(rep, c);
    return failed == 0 ? kOk : kCertificate;
  }

  static void add_summary(ExperimentReport& rep, const DiscreteConstants& K, const SelectionState& st,
                          const LocalizationCertificate& cert) {
    rep.parameters()["K0"] = K.K0;
    rep.parameters()["K1"] = K.K1;
    rep.parameters()["K"] = K.K;
    rep.parameters()["parity"] = st.parity == 1 ? "odd" : "even";
    rep.parameters()["selected_blocks"] = st.selected_blocks;
    rep.parameters()["certificate"] = {{"disjoint", cert.disjoint},
                                       {"claim", cert.claim},
                                       {"claim_lhs", cert.claim_lhs},
                                       {"claim_rhs", cert.claim_rhs},
                                       {"level_inclusion", cert.level_inclusion},
                                       {"level_threshold", cert.level_threshold},
                                       {"headline", cert.headline},
                                       {"headline_lhs", cert.headline_lhs},
                                       {"headline_rhs", cert.headline_rhs},
                                       {"containment", cert.containment},
                                       {"C1", cert.C1},
                                       {"C2", cert.C2},
                                       {"violations", cert.violations}};
  }
};

struct VerifyCmd {
  std::vector<int> only;

  void add(CLI::App& app, Common& common, std::function<int()>& action) {
    auto* sub = app.add_subcommand("verify", "Run the acceptance suite");
    sub->add_option("--only", only, "Criterion ids to run")->delimiter(',');
    sub->callback([this, &common, &action] { action = [this, &common] { return run(common); }; });
  }

  int run(const Common& c) {
    for (int id : only)
      if (id < 1 || id > static_cast<int>(acceptance_criteria().size()))
        throw ConfigError("verify: no criterion " + std::to_string(id));
    const auto results = run_acceptance(only, c.exec(), [](const CriterionResult& r) {
      std::cout << format_result(r) << std::endl;
    });
    emit(acceptance_report(results), c);
    for (const auto& r : results)
      if (!r.passed) return kCertificate;
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap_from_env();

  CLI::App app{"radmax: maximal operators for radial measures in high dimension"};
  app.set_config("--config", "", "TOML or INI file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", version_tag());

  Common common;
  app.add_option("--out-dir", common.out_dir, "Directory for report files")->capture_default_str();
  app.add_option("--stamp", common.stamp, "Report file stamp (default: UTC time)");
  app.add_flag("--serial", common.serial, "Use the serial reference kernels");
  app.add_flag("--no-write", common.no_write, "Do not write report files");
  app.add_flag("--print-csv", common.print_csv, "Print the CSV report to stdout");
  app.add_option("--rel-tol", common.rel_tol, "Quadrature relative tolerance")->capture_default_str();

  std::function<int()> action;
  BallMeasureCmd ball;
  ConstantsCmd constants;
  LimitCmd limit;
  CounterexampleCmd counter;
  PowerFamilyCmd family;
  MaximalCmd maximal;
  LocalizeCmd localize;
  VerifyCmd verify;
  ball.add(app, common, action);
  constants.add(app, common, action);
  limit.add(app, common, action);
  counter.add(app, common, action);
  family.add(app, common, action);
  maximal.add(app, common, action);
  localize.add(app, common, action);
  verify.add(app, common, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    return action();
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDivergence;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
}
