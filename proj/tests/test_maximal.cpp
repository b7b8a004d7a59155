#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "radmax/maximal.hpp"
#include "radmax/radial_geometry.hpp"

using namespace radmax;

namespace {

std::vector<double> uniform_nodes(int cells, double hi) {
  std::vector<double> t(cells + 1);
  for (int i = 0; i <= cells; ++i) t[i] = hi * i / cells;
  return t;
}

RadialFunction random_function(std::mt19937& rng, std::size_t cells) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RadialFunction F;
  for (std::size_t i = 0; i < cells; ++i) F.values.push_back(u(rng) < 0.3 ? 0.0 : u(rng) * 5.0);
  return F;
}

Grid1D random_grid(std::mt19937& rng, int cells) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(cells);
  for (double& x : m) x = u(rng) < 0.1 ? 0.0 : std::exp(3.0 * u(rng));
  return Grid1D::from_masses(uniform_nodes(cells, 1.0), m);
}

// Centered maximal function of a point configuration by brute force over
// every ball: center c, closed radius equal to some |c - q|.
std::vector<double> brute_centered(const Lattice& L, const std::vector<double>& f,
                                   const std::vector<double>& m) {
  std::vector<double> out(L.size(), 0.0);
  for (std::size_t c = 0; c < L.size(); ++c)
    for (std::size_t q = 0; q < L.size(); ++q) {
      const double r2 = std::pow(L.points[c][0] - L.points[q][0], 2) + std::pow(L.points[c][1] - L.points[q][1], 2);
      double s = 0.0, w = 0.0;
      for (std::size_t p = 0; p < L.size(); ++p) {
        const double d2 = std::pow(L.points[c][0] - L.points[p][0], 2) + std::pow(L.points[c][1] - L.points[p][1], 2);
        if (d2 <= r2 + 1e-9) {
          s += std::fabs(f[p]) * m[p];
          w += m[p];
        }
      }
      if (w > 0.0) out[c] = std::max(out[c], s / w);
    }
  return out;
}

}  // namespace

TEST_SUITE("maximal") {
  TEST_CASE("fast non-centered maximal function matches the range scan") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const auto grid = random_grid(rng, 5 + trial * 3);
      const auto F = random_function(rng, grid.cells());
      const auto naive = noncentered_max_naive(F, grid);
      const auto serial = noncentered_max(F, grid, Exec::serial);
      const auto par = noncentered_max(F, grid, Exec::parallel);
      for (std::size_t i = 0; i < grid.cells(); ++i) {
        CHECK(serial.values[i] == doctest::Approx(naive.values[i]).epsilon(1e-12));
        CHECK(par.values[i] == serial.values[i]);
      }
    }
  }

  TEST_CASE("sublinear, monotone and an L-infinity contraction") {
    std::mt19937 rng(3);
    const auto grid = random_grid(rng, 40);
    const auto F = random_function(rng, 40), G = random_function(rng, 40);
    RadialFunction sum, bigger;
    for (std::size_t i = 0; i < 40; ++i) {
      sum.values.push_back(F.values[i] + G.values[i]);
      bigger.values.push_back(std::max(F.values[i], G.values[i]));
    }
    const auto MF = noncentered_max(F, grid), MG = noncentered_max(G, grid);
    const auto MS = noncentered_max(sum, grid), MB = noncentered_max(bigger, grid);
    const double sup = *std::max_element(F.values.begin(), F.values.end());
    for (std::size_t i = 0; i < 40; ++i) {
      CHECK(MS.values[i] <= MF.values[i] + MG.values[i] + 1e-12);
      CHECK(MB.values[i] >= MF.values[i] - 1e-12);
      CHECK(MF.values[i] <= sup + 1e-12);
      if (grid.mass[i] > 0.0) CHECK(MF.values[i] >= F.values[i] - 1e-12);
    }
  }

  TEST_CASE("indicator of the unit interval under Lebesgue measure") {
    const auto grid = Grid1D::lebesgue(uniform_nodes(400, 4.0));
    const auto F = RadialFunction::sample(grid, [](double t) { return t < 1.0 ? 1.0 : 0.0; });
    const auto M = noncentered_max(F, grid);
    const auto nodes = cell_max_at_nodes(M);
    for (int k : {100, 200, 300, 400}) CHECK(nodes[k] == doctest::Approx(1.0 / grid.nodes[k]).epsilon(1e-12));
    const auto left = one_sided_max(F, Side::left, grid);
    CHECK(left[200] == doctest::Approx(0.5).epsilon(1e-12));
    const auto right = one_sided_max(F, Side::right, grid);
    CHECK(right[50] == doctest::Approx(1.0));
    CHECK(right[200] == 0.0);
  }

  TEST_CASE("origin-centered operator") {
    // Lebesgue measure in the plane: v(t) = t on [0, 3], f = 1 on the unit ball.
    const auto nodes = uniform_nodes(300, 3.0);
    std::vector<double> m(300);
    for (int i = 0; i < 300; ++i) m[i] = 0.5 * (nodes[i + 1] * nodes[i + 1] - nodes[i] * nodes[i]);
    const auto grid = Grid1D::from_masses(nodes, m);
    const auto f = RadialFunction::sample(grid, [](double t) { return t < 1.0 ? 1.0 : 0.0; });
    const auto H = hardy_operator_nodes(f, grid);
    CHECK(H[50] == doctest::Approx(1.0));
    CHECK(H[200] == doctest::Approx(0.25).epsilon(1e-12));
    // lambda |{H f > lambda}| = lambda |B_(lambda^-1/2)| = |B_1|: ratio one.
    CHECK(weak_type_ratio(hardy_operator(f, grid), grid, f.l1(grid)) == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("weak type of the non-centered operator stays below two") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
      const auto grid = random_grid(rng, 30);
      const auto F = random_function(rng, 30);
      const double norm = F.l1(grid);
      if (norm == 0.0) continue;
      CHECK(weak_type_ratio(noncentered_max(F, grid), grid, norm) <= 2.0 + 1e-12);
    }
  }

  TEST_CASE("radial reduction bound scales the envelope") {
    std::mt19937 rng(4);
    const auto grid = random_grid(rng, 25);
    const auto F = random_function(rng, 25);
    const auto M = noncentered_max(F, grid);
    const auto B = radial_reduction_bound(F, grid, 2.5);
    for (std::size_t i = 0; i < 25; ++i) CHECK(B.values[i] == doctest::Approx(3.5 * M.values[i]));
  }

  TEST_CASE("weighted grids keep huge dimensions representable") {
    const auto grid = Grid1D::weighted(RadialDensity::constant(1.0), 3000, Grid1D::default_nodes(64, 0.1, 2.0));
    CHECK(std::isfinite(grid.total_mass()));
    CHECK(grid.total_mass() > 0.0);
    // Cell masses of t^(n-1) dt on adjacent cells: ratio (b^n - a^n) / (a^n - c^n).
    const auto& t = grid.nodes;
    const double expected = std::log(std::expm1(3000 * std::log(t[64] / t[63]))) -
                            std::log(std::expm1(3000 * std::log(t[63] / t[62]))) + 3000 * std::log(t[63] / t[62]);
    CHECK(std::log(grid.mass[63] / grid.mass[62]) == doctest::Approx(expected).epsilon(1e-8));
  }

  TEST_CASE("point mass at the origin") {
    for (int n : {2, 3, 40}) {
      const auto lm = delta_maximal(RadialDensity::constant(1.0), n, 0.7);
      CHECK(lm.log() == doctest::Approx(-log_ball_volume(n, 0.7).log()).epsilon(1e-10));
    }
    const auto db = delta_lower_bound(RadialDensity::constant(1.0), 6, {0.5, 1.0, 2.0});
    CHECK(db.estimate.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(db.monotone);
  }

  TEST_CASE("centered lattice oracle") {
    const auto L = Lattice::centered(1, 40, 1.0);
    std::vector<double> f(L.size(), 0.0);
    f[20] = 1.0;
    const auto M = grid_maximal_oracle(L, f, L.lebesgue_masses());
    for (int k : {0, 1, 2, 5}) CHECK(M[20 + k] == doctest::Approx(1.0 / (2 * k + 1)));

    const auto P = Lattice::centered(2, 8, 0.5);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> g(P.size()), m(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) {
      g[i] = u(rng) < 0.5 ? 0.0 : u(rng);
      m[i] = 0.1 + u(rng);
    }
    const auto brute = brute_centered(P, g, m);
    const auto fast = grid_maximal_oracle(P, g, m, Exec::serial);
    const auto par = grid_maximal_oracle(P, g, m, Exec::parallel);
    for (std::size_t i = 0; i < P.size(); ++i) {
      CHECK(fast[i] == doctest::Approx(brute[i]).epsilon(1e-12));
      CHECK(par[i] == fast[i]);
    }
  }

  TEST_CASE("origin-ball lattice oracle is a suffix maximum") {
    const auto L = Lattice::centered(2, 10, 0.2);
    const auto m = L.lebesgue_masses();
    std::vector<double> f(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) f[i] = L.norm(i) < 0.5 ? 1.0 : 0.0;
    const auto H = grid_hardy_oracle(L, f, m);
    for (std::size_t i = 0; i < L.size(); ++i) {
      if (L.norm(i) < 0.5) CHECK(H[i] == doctest::Approx(1.0));
      // Every admissible ball reaches past |x|, so the average is at most the
      // inner mass fraction of the ball of radius |x|.
      double in = 0.0, all = 0.0;
      for (std::size_t q = 0; q < L.size(); ++q)
        if (L.norm(q) <= L.norm(i) + 1e-12) {
          all += m[q];
          in += f[q] * m[q];
        }
      CHECK(H[i] >= in / all - 1e-12);
    }
  }
}
