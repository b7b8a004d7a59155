#include "radmax/finite.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "optimize.hpp"
#include "radmax/error.hpp"

namespace radmax {

namespace {

constexpr double kRelSlack = 1e-12;

using Bits = std::vector<std::uint64_t>;

Bits ball_bits(const FiniteMetricMeasureSpace& space, std::size_t x, double r) {
  const std::size_t P = space.size();
  Bits b((P + 63) / 64, 0);
  for (std::size_t y = 0; y < P; ++y)
    if (space.d(x, y) < r) b[y / 64] |= std::uint64_t{1} << (y % 64);
  return b;
}

bool intersects(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

bool contains(const Bits& b, std::size_t y) { return (b[y / 64] >> (y % 64)) & 1U; }

// Radii at which every ball and every (1 + 1/n)-dilate is constant between
// consecutive entries; one representative per open interval.
std::vector<double> representative_radii(const FiniteMetricMeasureSpace& space, double dilation) {
  std::vector<double> critical = space.distinct_distances();
  if (dilation != 1.0) {
    const std::size_t m = critical.size();
    for (std::size_t i = 0; i < m; ++i) critical.push_back(critical[i] / dilation);
  }
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());
  if (critical.empty()) return {1.0};
  std::vector<double> reps{0.5 * critical.front()};
  for (std::size_t i = 0; i + 1 < critical.size(); ++i) reps.push_back(0.5 * (critical[i] + critical[i + 1]));
  reps.push_back(2.0 * critical.back());
  return reps;
}

std::vector<bool> as_set(const FiniteMetricMeasureSpace& space, std::size_t x, double r) {
  std::vector<bool> s(space.size());
  for (std::size_t y = 0; y < space.size(); ++y) s[y] = space.d(x, y) < r;
  return s;
}

double integral(const FiniteMetricMeasureSpace& space, const std::vector<bool>& set,
                const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t y = 0; y < space.size(); ++y)
    if (set[y]) s += std::fabs(f[y]) * space.weight(y);
  return s;
}

std::string point_name(const FiniteMetricMeasureSpace& space, std::size_t x) { return space.labels()[x]; }

}  // namespace

FiniteMetricMeasureSpace::FiniteMetricMeasureSpace(std::vector<std::vector<double>> distances,
                                                   std::vector<double> weights,
                                                   std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  const std::size_t P = weights_.size();
  if (P == 0) throw DomainError("metric space needs at least one point");
  if (distances.size() != P) throw DomainError("distance matrix must be P x P");
  dist_.resize(P * P);
  for (std::size_t i = 0; i < P; ++i) {
    if (distances[i].size() != P) throw DomainError("distance matrix must be P x P");
    for (std::size_t j = 0; j < P; ++j) dist_[i * P + j] = distances[i][j];
  }
  if (labels_.empty())
    for (std::size_t i = 0; i < P; ++i) labels_.push_back("p" + std::to_string(i));
  if (labels_.size() != P) throw DomainError("one label per point");
  validate();
  sorted_d_.resize(P);
  cum_w_.resize(P);
  for (std::size_t x = 0; x < P; ++x) {
    std::vector<std::size_t> order(P);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d(x, a) < d(x, b); });
    cum_w_[x].push_back(0.0);
    for (std::size_t y : order) {
      sorted_d_[x].push_back(d(x, y));
      cum_w_[x].push_back(cum_w_[x].back() + weights_[y]);
    }
  }
}

void FiniteMetricMeasureSpace::validate() const {
  const std::size_t P = size();
  for (double w : weights_)
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and > 0");
  for (std::size_t i = 0; i < P; ++i) {
    if (d(i, i) != 0.0) throw DomainError("distance matrix needs a zero diagonal");
    for (std::size_t j = 0; j < i; ++j) {
      if (!(d(i, j) > 0.0) || !std::isfinite(d(i, j)))
        throw DomainError("distances between distinct points must be finite and > 0");
      if (d(i, j) != d(j, i)) throw DomainError("distance matrix must be symmetric");
    }
  }
  if (P > 300) return;
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < P; ++j)
      for (std::size_t k = 0; k < P; ++k)
        if (d(i, j) > (d(i, k) + d(k, j)) * (1.0 + kRelSlack))
          throw DomainError("triangle inequality fails for (" + labels_[i] + ", " + labels_[k] + ", " +
                            labels_[j] + ")");
}

FiniteMetricMeasureSpace FiniteMetricMeasureSpace::from_points(const std::vector<std::vector<double>>& coords,
                                                               std::vector<double> weights) {
  const std::size_t P = coords.size();
  std::vector<std::vector<double>> D(P, std::vector<double>(P, 0.0));
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < coords[i].size(); ++c) s += (coords[i][c] - coords[j][c]) * (coords[i][c] - coords[j][c]);
      D[i][j] = D[j][i] = std::sqrt(s);
    }
  return FiniteMetricMeasureSpace(std::move(D), std::move(weights));
}

FiniteMetricMeasureSpace FiniteMetricMeasureSpace::lattice(int dim, int side) {
  if (dim < 1 || side < 1) throw DomainError("lattice needs dim >= 1 and side >= 1");
  std::vector<std::vector<double>> coords;
  std::vector<int> idx(dim, 0);
  const long long total = static_cast<long long>(std::pow(side, dim));
  for (long long c = 0; c < total; ++c) {
    long long v = c;
    std::vector<double> p(dim);
    for (int k = 0; k < dim; ++k) {
      p[k] = static_cast<double>(v % side);
      v /= side;
    }
    coords.push_back(std::move(p));
  }
  return from_points(coords, std::vector<double>(coords.size(), 1.0));
}

FiniteMetricMeasureSpace FiniteMetricMeasureSpace::from_json(const Json& j) {
  if (j.value("schema_version", 1) != 1) throw ConfigError("unsupported space schema version");
  const auto weights = j.at("weights").get<std::vector<double>>();
  const std::size_t P = weights.size();
  std::vector<std::string> labels;
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    if (labels.size() != P) throw ConfigError("points and weights differ in length");
  }
  const auto& rows = j.at("distances");
  if (rows.size() != P) throw ConfigError("distances must have one row per point");
  std::vector<std::vector<double>> D(P, std::vector<double>(P, 0.0));
  for (std::size_t i = 0; i < P; ++i) {
    const auto row = rows[i].get<std::vector<double>>();
    if (row.size() != i + 1)
      throw ConfigError("distance row " + std::to_string(i) + " must hold " + std::to_string(i + 1) +
                        " entries (lower triangle with diagonal)");
    for (std::size_t k = 0; k <= i; ++k) D[i][k] = D[k][i] = row[k];
  }
  try {
    return FiniteMetricMeasureSpace(std::move(D), weights, std::move(labels));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid space: ") + e.what());
  }
}

FiniteMetricMeasureSpace FiniteMetricMeasureSpace::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j);
}

Json FiniteMetricMeasureSpace::to_json() const {
  Json j;
  j["schema_version"] = 1;
  j["points"] = labels_;
  Json rows = Json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    std::vector<double> row;
    for (std::size_t k = 0; k <= i; ++k) row.push_back(d(i, k));
    rows.push_back(row);
  }
  j["distances"] = rows;
  j["weights"] = weights_;
  return j;
}

double FiniteMetricMeasureSpace::ball_measure(std::size_t x, double r) const {
  const auto& sd = sorted_d_[x];
  const std::size_t k = std::lower_bound(sd.begin(), sd.end(), r) - sd.begin();
  return cum_w_[x][k];
}

std::vector<std::size_t> FiniteMetricMeasureSpace::ball(std::size_t x, double r) const {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < size(); ++y)
    if (d(x, y) < r) out.push_back(y);
  return out;
}

double FiniteMetricMeasureSpace::measure(const std::vector<bool>& set) const {
  double m = 0.0;
  for (std::size_t y = 0; y < size(); ++y)
    if (set[y]) m += weights_[y];
  return m;
}

std::vector<double> FiniteMetricMeasureSpace::distinct_distances() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < i; ++j) out.push_back(d(i, j));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TimeSet::TimeSet(std::vector<double> radii, double n, std::optional<double> lacunarity)
    : radii_(std::move(radii)), n_(n), lacunarity_(lacunarity) {
  if (radii_.empty()) throw DomainError("time set needs at least one radius");
  if (!(n_ > 1.0)) throw DomainError("time set block parameter n must exceed 1");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i])) throw DomainError("radii must be finite and > 0");
    if (i > 0 && !(radii_[i] > radii_[i - 1])) throw DomainError("radii must increase strictly");
  }
  if (lacunarity_) {
    if (!(*lacunarity_ > 1.0)) throw DomainError("lacunarity constant must exceed 1");
    for (std::size_t i = 1; i < radii_.size(); ++i)
      if (!(radii_[i] > *lacunarity_ * radii_[i - 1]))
        throw DomainError("radii are not lacunary with the declared constant");
  }
}

int TimeSet::block(double r) const {
  int k = static_cast<int>(std::floor(std::log(r) / std::log(n_)));
  while (std::pow(n_, k) > r) --k;
  while (std::pow(n_, k + 1) <= r) ++k;
  return k;
}

std::vector<double> TimeSet::block_radii(int k) const {
  std::vector<double> out;
  for (double r : radii_)
    if (block(r) == k) out.push_back(r);
  return out;
}

std::vector<int> TimeSet::blocks() const {
  std::vector<int> out;
  for (double r : radii_) out.push_back(block(r));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> brute_max(const FiniteMetricMeasureSpace& space, const std::vector<double>& radii,
                              const std::vector<double>& f, Exec exec) {
  const std::size_t P = space.size();
  if (f.size() != P) throw DomainError("function size must match the space");
  std::vector<double> out(P, 0.0);
  auto at = [&](std::size_t x) {
    double best = 0.0;
    for (double r : radii) {
      double s = 0.0, m = 0.0;
      for (std::size_t y = 0; y < P; ++y)
        if (space.d(x, y) < r) {
          s += std::fabs(f[y]) * space.weight(y);
          m += space.weight(y);
        }
      best = std::max(best, s / m);
    }
    out[x] = best;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t x = 0; x < P; ++x) at(x);
  } else {
    for (std::size_t x = 0; x < P; ++x) at(x);
  }
  return out;
}

DiscreteConstants discrete_constants(const FiniteMetricMeasureSpace& space, double n) {
  if (!(n > 0.0)) throw DomainError("discrete_constants: n must be positive");
  const double dil = 1.0 + 1.0 / n;
  const std::size_t P = space.size();
  DiscreteConstants c;
  std::vector<Bits> bits(P);
  std::vector<double> m(P), md(P);
  for (double r : representative_radii(space, dil)) {
    for (std::size_t x = 0; x < P; ++x) {
      bits[x] = ball_bits(space, x, r);
      m[x] = space.ball_measure(x, r);
      md[x] = space.ball_measure(x, dil * r);
      c.K0 = std::max(c.K0, md[x] / m[x]);
    }
    for (std::size_t x = 0; x < P; ++x)
      for (std::size_t y = 0; y < P; ++y) {
        if (intersects(bits[x], bits[y])) c.K1 = std::max(c.K1, m[y] / m[x]);
        if (contains(bits[x], y)) c.K = std::max(c.K, md[y] / m[x]);
      }
  }
  return c;
}

double weak_doubling_at(const FiniteMetricMeasureSpace& space, double r) {
  const std::size_t P = space.size();
  std::vector<Bits> bits(P);
  std::vector<double> m(P);
  for (std::size_t x = 0; x < P; ++x) {
    bits[x] = ball_bits(space, x, r);
    m[x] = space.ball_measure(x, r);
  }
  double K1 = 1.0;
  for (std::size_t x = 0; x < P; ++x)
    for (std::size_t y = 0; y < P; ++y)
      if (intersects(bits[x], bits[y])) K1 = std::max(K1, m[y] / m[x]);
  return K1;
}

SingleRadiusNorm single_radius_l1(const FiniteMetricMeasureSpace& space, double r) {
  if (!(r > 0.0)) throw DomainError("single_radius_l1: r must be positive");
  const std::size_t P = space.size();
  std::vector<double> m(P);
  for (std::size_t x = 0; x < P; ++x) m[x] = space.ball_measure(x, r);
  SingleRadiusNorm out;
  out.norm = 0.0;
  for (std::size_t y = 0; y < P; ++y) {
    double col = 0.0;
    for (std::size_t x = 0; x < P; ++x)
      if (space.d(x, y) < r) col += space.weight(x) / m[x];
    if (col > out.norm) {
      out.norm = col;
      out.witness = y;
    }
  }
  out.K1 = weak_doubling_at(space, r);
  return out;
}

SelectionState run_selection(const FiniteMetricMeasureSpace& space, const TimeSet& T,
                             const std::vector<double>& f, double lambda, double K0) {
  if (!(lambda > 0.0)) throw DomainError("run_selection: lambda must be positive");
  if (!(K0 >= 1.0)) throw DomainError("run_selection: K0 must be at least 1");
  const std::size_t P = space.size();
  if (f.size() != P) throw DomainError("function size must match the space");
  const double n = T.n();
  const double dil = 1.0 + 1.0 / n;

  SelectionState st;
  st.lambda = lambda;
  st.n = n;
  st.K0 = K0;

  std::vector<SelectedBall> window;
  for (std::size_t x = 0; x < P; ++x)
    for (double R : T.radii()) {
      SelectedBall b;
      b.center = x;
      b.R = R;
      b.ball = as_set(space, x, R);
      b.mass = space.measure(b.ball);
      const double avg = integral(space, b.ball, f) / b.mass;
      if (!(avg > lambda && avg <= 2.0 * lambda)) continue;

      // Smallest admissible radius for B~: the core B(x, R - R~) grows as R~
      // shrinks. Ball contents change only at distances d(x, y) (for B~) and
      // at R - d(x, y) (for the core), so one candidate per gap suffices.
      const double lo = R / dil;
      std::vector<double> cuts{lo};
      for (std::size_t y = 0; y < P; ++y) {
        for (double c : {space.d(x, y), R - space.d(x, y)})
          if (c > lo && c < R) cuts.push_back(c);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      cuts.push_back(R);
      std::vector<double> candidates{lo};
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) candidates.push_back(0.5 * (cuts[i] + cuts[i + 1]));
      b.R_tilde = R;
      for (double rt : candidates) {
        if (integral(space, as_set(space, x, rt), f) > lambda * b.mass) {
          b.R_tilde = rt;
          break;
        }
      }
      if (b.R_tilde >= R) throw DomainError("run_selection: no admissible inner ball (internal)");
      b.tilde = as_set(space, x, b.R_tilde);
      b.core = as_set(space, x, R - b.R_tilde);
      b.block = T.block(R);
      window.push_back(std::move(b));
    }
  st.window_balls = window.size();
  if (window.empty()) return st;

  std::vector<bool> odd(P), even(P);
  for (const auto& b : window) {
    auto& target = (b.block % 2 != 0) ? odd : even;
    for (std::size_t y = 0; y < P; ++y)
      if (b.core[y]) target[y] = true;
  }
  st.odd_core_mass = space.measure(odd);
  st.even_core_mass = space.measure(even);
  st.parity = st.odd_core_mass >= st.even_core_mass ? 1 : 0;
  for (auto& b : window)
    if ((b.block % 2 != 0 ? 1 : 0) == st.parity) st.balls.push_back(std::move(b));

  std::stable_sort(st.balls.begin(), st.balls.end(), [](const SelectedBall& a, const SelectedBall& b) {
    return a.R != b.R ? a.R > b.R : a.center < b.center;
  });

  std::vector<bool> covered(P);
  for (auto& b : st.balls) {
    b.D.assign(P, false);
    for (std::size_t y = 0; y < P; ++y)
      if (b.core[y] && !covered[y]) b.D[y] = true;
    for (std::size_t y = 0; y < P; ++y)
      if (b.core[y]) covered[y] = true;
    b.D_mass = space.measure(b.D);
  }

  std::map<int, std::vector<std::size_t>, std::greater<>> by_block;
  for (std::size_t i = 0; i < st.balls.size(); ++i) by_block[st.balls[i].block].push_back(i);

  std::vector<double> G(P, 0.0);  // sum of the already selected G~
  std::vector<std::vector<bool>> supports;
  for (const auto& [k, members] : by_block) {
    const int j = static_cast<int>(st.selected_blocks.size());
    st.selected_blocks.push_back(k);
    std::vector<std::size_t> chosen;
    for (std::size_t i : members) {
      const auto& b = st.balls[i];
      bool ok = true;
      if (j > 0)
        for (std::size_t y = 0; y < P && ok; ++y)
          if (b.ball[y] && G[y] > 1.0) ok = false;
      if (ok) chosen.push_back(i);
    }
    std::vector<bool> support(P);
    for (std::size_t i : chosen) {
      auto& b = st.balls[i];
      b.selected = true;
      b.selection_index = j;
      const double g = b.D_mass / b.mass;
      for (std::size_t y = 0; y < P; ++y)
        if (b.tilde[y]) {
          G[y] += g;
          if (g > 0.0) support[y] = true;
        }
    }
    supports.push_back(std::move(support));
  }

  const std::size_t M = supports.size();
  st.A.assign(M, std::vector<bool>(P));
  for (std::size_t j = 0; j < M; ++j)
    for (std::size_t y = 0; y < P; ++y) {
      bool later = false;
      for (std::size_t l = j + 1; l < M && !later; ++l) later = supports[l][y];
      st.A[j][y] = supports[j][y] && !later;
    }

  for (auto& b : st.balls) {
    if (!b.selected) continue;
    double s = 0.0;
    for (std::size_t y = 0; y < P; ++y)
      if (b.tilde[y] && st.A[b.selection_index][y]) s += std::fabs(f[y]) * space.weight(y);
    b.absorbed = s / b.mass <= 0.5 * lambda;
  }
  return st;
}

LocalizationCertificate certify_localization(const SelectionState& st, const FiniteMetricMeasureSpace& space,
                                             const TimeSet& T, const std::vector<double>& f) {
  const std::size_t P = space.size();
  const double lambda = st.lambda;
  const double dil = 1.0 + 1.0 / T.n();
  LocalizationCertificate c;
  c.C1 = 16.0 * (1.0 + st.K0);
  c.C2 = 1.0 / (2.0 * st.K0);
  c.level_threshold = lambda / (2.0 * st.K0);

  std::vector<int> owner(P, -1);
  for (std::size_t j = 0; j < st.A.size(); ++j)
    for (std::size_t y = 0; y < P; ++y)
      if (st.A[j][y]) {
        if (owner[y] >= 0) {
          c.disjoint = false;
          c.violations.push_back("(a) point " + point_name(space, y) + " lies in A_" + std::to_string(owner[y] + 1) +
                                 " and A_" + std::to_string(j + 1));
        }
        owner[y] = static_cast<int>(j);
      }

  std::vector<bool> union_D(P);
  double selected_D = 0.0;
  for (const auto& b : st.balls) {
    for (std::size_t y = 0; y < P; ++y)
      if (b.D[y]) union_D[y] = true;
    if (b.selected) selected_D += b.D_mass;
  }
  c.claim_lhs = space.measure(union_D);
  c.claim_rhs = (1.0 + st.K0) * selected_D;
  c.claim = c.claim_lhs <= c.claim_rhs * (1.0 + kRelSlack);
  if (!c.claim)
    c.violations.push_back("(b) mu(union D) = " + format_double(c.claim_lhs) + " exceeds " +
                           format_double(c.claim_rhs));

  // M_{k_j}(f chi_{A_j}) for every selected block.
  std::vector<std::vector<double>> localized(st.A.size());
  for (std::size_t j = 0; j < st.A.size(); ++j) {
    std::vector<double> fj(P, 0.0);
    for (std::size_t y = 0; y < P; ++y)
      if (st.A[j][y]) fj[y] = f[y];
    localized[j] = brute_max(space, T.block_radii(st.selected_blocks[j]), fj, Exec::serial);
  }

  for (const auto& b : st.balls) {
    if (!b.selected || b.absorbed) continue;
    const auto& Mj = localized[b.selection_index];
    for (std::size_t z = 0; z < P; ++z)
      if (b.core[z] && !(Mj[z] > c.level_threshold)) {
        c.level_inclusion = false;
        c.violations.push_back("(c) ball (" + point_name(space, b.center) + ", " + format_double(b.R) +
                               "): core point " + point_name(space, z) + " has M = " + format_double(Mj[z]));
      }
  }

  for (const auto& b : st.balls) {
    for (std::size_t z = 0; z < P; ++z) {
      if (!b.core[z]) continue;
      for (std::size_t y = 0; y < P; ++y) {
        const bool in_zball = space.d(z, y) < b.R;
        const bool in_star = space.d(b.center, y) < dil * b.R;
        if ((b.tilde[y] && !in_zball) || (in_zball && !in_star)) {
          c.containment = false;
          c.violations.push_back("containment fails for ball (" + point_name(space, b.center) + ", " +
                                 format_double(b.R) + ") at z = " + point_name(space, z) +
                                 ", y = " + point_name(space, y));
        }
      }
    }
  }

  const auto Mf = brute_max(space, T.radii(), f, Exec::serial);
  std::vector<bool> F(P);
  for (std::size_t y = 0; y < P; ++y) F[y] = Mf[y] > lambda && Mf[y] <= 2.0 * lambda;
  c.headline_lhs = space.measure(F);
  double f_norm = 0.0;
  for (std::size_t y = 0; y < P; ++y) f_norm += std::fabs(f[y]) * space.weight(y);
  double levels = 0.0;
  for (const auto& Mj : localized) {
    std::vector<bool> E(P);
    for (std::size_t y = 0; y < P; ++y) E[y] = Mj[y] > c.C2 * lambda;
    levels += space.measure(E);
  }
  c.headline_rhs = c.C1 * (f_norm / lambda + levels);
  c.headline = c.headline_lhs <= c.headline_rhs * (1.0 + kRelSlack);
  if (!c.headline)
    c.violations.push_back("(d) mu(F_lambda) = " + format_double(c.headline_lhs) + " exceeds " +
                           format_double(c.headline_rhs));
  return c;
}

double weak_ratio(const FiniteMetricMeasureSpace& space, const std::vector<double>& Mf, double f_norm) {
  if (!(f_norm > 0.0)) return 0.0;
  std::vector<std::size_t> order(space.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return Mf[a] > Mf[b]; });
  double mass = 0.0, best = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    mass += space.weight(order[r]);
    if (r + 1 == order.size() || Mf[order[r + 1]] < Mf[order[r]]) best = std::max(best, Mf[order[r]] * mass);
  }
  return best / f_norm;
}

WeakNormProbe weak_norm_probe(const FiniteMetricMeasureSpace& space, const std::vector<double>& radii,
                              int random_trials, std::uint64_t seed) {
  const std::size_t P = space.size();
  WeakNormProbe out;
  std::vector<double> ratio(P);
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t x = 0; x < P; ++x)
    slot.run([&] {
      std::vector<double> f(P, 0.0);
      f[x] = 1.0;
      ratio[x] = weak_ratio(space, brute_max(space, radii, f, Exec::serial), space.weight(x));
    });
  slot.rethrow();
  for (std::size_t x = 0; x < P; ++x)
    if (ratio[x] > out.point_mass_bound) {
      out.point_mass_bound = ratio[x];
      out.witness = x;
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < random_trials; ++t) {
    std::vector<double> f(P);
    const double density = U(rng);
    double norm = 0.0;
    for (std::size_t y = 0; y < P; ++y) {
      f[y] = U(rng) < density ? U(rng) : 0.0;
      norm += f[y] * space.weight(y);
    }
    out.random_bound = std::max(out.random_bound, weak_ratio(space, brute_max(space, radii, f), norm));
  }
  return out;
}

FiniteMetricMeasureSpace random_space(std::uint64_t seed, const RandomSpaceSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int P = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.max_points));
  const int kind = static_cast<int>(rng() % 3);
  std::vector<std::vector<double>> coords(P);
  if (kind == 0) {
    const int dim = 1 + static_cast<int>(rng() % 3);
    for (auto& p : coords)
      for (int k = 0; k < dim; ++k) p.push_back(10.0 * U(rng));
  } else if (kind == 1) {
    const int clusters = 1 + static_cast<int>(rng() % 4);
    std::vector<std::vector<double>> centers(clusters);
    for (auto& c : centers) c = {20.0 * U(rng), 20.0 * U(rng)};
    for (auto& p : coords) {
      const auto& c = centers[rng() % clusters];
      p = {c[0] + 0.5 * U(rng), c[1] + 0.5 * U(rng)};
    }
  } else {
    // Integer points on a line: many tied distances.
    std::vector<int> xs(3 * P);
    std::iota(xs.begin(), xs.end(), 0);
    std::shuffle(xs.begin(), xs.end(), rng);
    for (int i = 0; i < P; ++i) coords[i] = {static_cast<double>(xs[i])};
  }
  std::vector<double> w(P);
  const bool equal = rng() % 4 == 0;
  for (auto& x : w) x = equal ? 1.0 : std::exp(3.0 * U(rng) - 1.5);
  return FiniteMetricMeasureSpace::from_points(coords, std::move(w));
}

LocalizationInstance random_localization_instance(std::uint64_t seed, const RandomSpaceSpec& spec) {
  auto space = random_space(seed, spec);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::size_t P = space.size();

  const double ns[] = {1.5, 2.0, 3.0, 4.0};
  const double n = ns[rng() % 4];
  const auto dists = space.distinct_distances();
  const double dmax = dists.empty() ? 1.0 : dists.back();
  const double dmin = dists.empty() ? 1.0 : dists.front();
  const int count = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.max_radii));
  std::vector<double> radii;
  for (int i = 0; i < count; ++i) radii.push_back(0.5 * dmin * std::pow(4.0 * dmax / dmin, U(rng)));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  TimeSet T(radii, n);

  std::vector<double> f(P, 0.0);
  const double density = 0.1 + 0.9 * U(rng);
  for (auto& v : f)
    if (U(rng) < density) v = std::exp(4.0 * U(rng) - 2.0);
  if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[rng() % P] = 1.0;

  auto Mf = brute_max(space, T.radii(), f, Exec::serial);
  std::vector<double> positive;
  for (double v : Mf)
    if (v > 0.0) positive.push_back(v);
  std::sort(positive.begin(), positive.end());
  const double q = positive[static_cast<std::size_t>(U(rng) * positive.size()) % positive.size()];
  const double lambda = q * (0.55 + 0.4 * U(rng));
  return {std::move(space), std::move(T), std::move(f), lambda};
}

}  // namespace radmax
