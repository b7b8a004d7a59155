#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "radmax/error.hpp"
#include "radmax/finite.hpp"

using namespace radmax;

namespace {

double avg_over_ball(const FiniteMetricMeasureSpace& S, std::size_t x, double r, const std::vector<double>& f) {
  double s = 0.0, w = 0.0;
  for (std::size_t y = 0; y < S.size(); ++y)
    if (S.d(x, y) < r) {
      s += std::fabs(f[y]) * S.weight(y);
      w += S.weight(y);
    }
  return s / w;
}

bool intersect(const FiniteMetricMeasureSpace& S, std::size_t x, std::size_t y, double r) {
  for (std::size_t z = 0; z < S.size(); ++z)
    if (S.d(x, z) < r && S.d(y, z) < r) return true;
  return false;
}

// Every radius at which some open ball changes: just above each distance.
std::vector<double> scan_radii(const FiniteMetricMeasureSpace& S, double dilation) {
  std::vector<double> r{S.distinct_distances().empty() ? 1.0 : S.distinct_distances().front() / 2};
  for (double d : S.distinct_distances())
    for (double e : {d, d / dilation}) {
      r.push_back(e * (1 + 1e-9));
      r.push_back(e * (1 - 1e-9));
    }
  return r;
}

}  // namespace

TEST_SUITE("finite") {
  TEST_CASE("single point and two points") {
    const FiniteMetricMeasureSpace one({{0.0}}, {2.0});
    const auto c = discrete_constants(one, 2.0);
    CHECK(c.K0 == 1.0);
    CHECK(c.K1 == 1.0);
    CHECK(c.K == 1.0);
    CHECK(weak_norm_probe(one, {1.0}).value() == doctest::Approx(1.0));

    const FiniteMetricMeasureSpace two({{0.0, 1.0}, {1.0, 0.0}}, {1.0, 1.0});
    const auto M = brute_max(two, {0.5, 2.0}, {1.0, 1.0});
    CHECK(M == std::vector<double>{1.0, 1.0});
    CHECK(weak_norm_probe(two, {2.0}).value() == doctest::Approx(1.0));
  }

  TEST_CASE("brute max against a double loop") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto inst = random_localization_instance(seed);
      const auto serial = brute_max(inst.space, inst.T.radii(), inst.f, Exec::serial);
      const auto par = brute_max(inst.space, inst.T.radii(), inst.f, Exec::parallel);
      for (std::size_t x = 0; x < inst.space.size(); ++x) {
        double best = 0.0;
        for (double r : inst.T.radii()) best = std::max(best, avg_over_ball(inst.space, x, r, inst.f));
        CHECK(serial[x] == doctest::Approx(best).epsilon(1e-12));
        CHECK(par[x] == serial[x]);
      }
    }
  }

  TEST_CASE("doubling constants against a dense radius scan") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto S = random_space(seed, {25, 8});
      const double n = 2.0;
      const auto c = discrete_constants(S, n);
      CHECK(c.K <= c.K0 * c.K1 * (1 + 1e-12));
      double k0 = 1.0, k1 = 1.0;
      for (double r : scan_radii(S, 1 + 1 / n))
        for (std::size_t x = 0; x < S.size(); ++x) {
          k0 = std::max(k0, S.ball_measure(x, (1 + 1 / n) * r) / S.ball_measure(x, r));
          for (std::size_t y = 0; y < S.size(); ++y)
            if (intersect(S, x, y, r)) k1 = std::max(k1, S.ball_measure(y, r) / S.ball_measure(x, r));
        }
      INFO("seed " << seed);
      CHECK(c.K0 == doctest::Approx(k0).epsilon(1e-12));
      CHECK(c.K1 == doctest::Approx(k1).epsilon(1e-12));
    }
  }

  TEST_CASE("single-radius operator norm") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto S = random_space(seed, {20, 8});
      const auto dd = S.distinct_distances();
      if (dd.empty()) continue;
      const double r = dd[dd.size() / 2];
      double best = 0.0;
      for (std::size_t y = 0; y < S.size(); ++y) {
        std::vector<double> delta(S.size(), 0.0);
        delta[y] = 1.0 / S.weight(y);
        const auto M = brute_max(S, {r}, delta, Exec::serial);
        double l1 = 0.0;
        for (std::size_t x = 0; x < S.size(); ++x) l1 += M[x] * S.weight(x);
        best = std::max(best, l1);
      }
      const auto norm = single_radius_l1(S, r);
      CHECK(norm.norm == doctest::Approx(best).epsilon(1e-12));
      CHECK(norm.norm <= norm.K1 * (1 + 1e-12));
    }
    // Unbalanced pair at a radius covering both: the norm is exactly one.
    const FiniteMetricMeasureSpace two({{0.0, 1.0}, {1.0, 0.0}}, {1.0, 9.0});
    CHECK(single_radius_l1(two, 2.0).norm == doctest::Approx(1.0));
    CHECK(single_radius_l1(two, 0.5).norm == doctest::Approx(1.0));
  }

  TEST_CASE("json round trip and validation") {
    const auto S = random_space(7);
    const auto back = FiniteMetricMeasureSpace::from_json(S.to_json());
    REQUIRE(back.size() == S.size());
    for (std::size_t x = 0; x < S.size(); ++x) {
      CHECK(back.weight(x) == S.weight(x));
      for (std::size_t y = 0; y < S.size(); ++y) CHECK(back.d(x, y) == S.d(x, y));
    }
    CHECK_THROWS_AS(FiniteMetricMeasureSpace({{0.0, 1.0}, {2.0, 0.0}}, {1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(FiniteMetricMeasureSpace({{0.0, 1.0}, {1.0, 0.0}}, {1.0, -1.0}), DomainError);
    CHECK_THROWS_AS(FiniteMetricMeasureSpace({{0.0, 1.0, 5.0}, {1.0, 0.0, 1.0}, {5.0, 1.0, 0.0}}, {1, 1, 1}),
                    DomainError);
    Json bad = S.to_json();
    bad["weights"] = Json::array({1.0});
    CHECK_THROWS_AS(FiniteMetricMeasureSpace::from_json(bad), ConfigError);
  }

  TEST_CASE("time sets") {
    const TimeSet T({1.0, 3.5, 12.0, 40.0}, 3.0, 3.0);
    CHECK(T.block(1.0) == 0);
    CHECK(T.block(8.9) == 1);
    CHECK(T.block(9.0) == 2);
    CHECK(T.blocks() == std::vector<int>{0, 1, 2, 3});
    CHECK(T.block_radii(2) == std::vector<double>{12.0});
  CHECK_THROWS_AS(TimeSet({1.0, 3.0}, 2.0, 3.0), DomainError);
    CHECK_THROWS_AS(TimeSet({1.0, 2.0}, 2.0, 3.0), DomainError);
    CHECK_THROWS_AS(TimeSet({1.0, -2.0}, 2.0), DomainError);
    CHECK_THROWS_AS(TimeSet({1.0}, 1.0), DomainError);
  }

  TEST_CASE("zero function gives an empty selection") {
    const auto inst = random_localization_instance(3);
    const auto c = discrete_constants(inst.space, inst.T.n());
    const auto state = run_selection(inst.space, inst.T, std::vector<double>(inst.space.size(), 0.0), 1.0, c.K0);
    CHECK(state.empty());
    CHECK(certify_localization(state, inst.space, inst.T, std::vector<double>(inst.space.size(), 0.0)).passed());
  }

  TEST_CASE("selection invariants and certificates") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const auto inst = random_localization_instance(seed);
      const auto c = discrete_constants(inst.space, inst.T.n());
      const auto state = run_selection(inst.space, inst.T, inst.f, inst.lambda, c.K0);
      const std::size_t P = inst.space.size();
      for (std::size_t i = 0; i < state.A.size(); ++i)
        for (std::size_t j = i + 1; j < state.A.size(); ++j)
          for (std::size_t x = 0; x < P; ++x) CHECK_FALSE((state.A[i][x] && state.A[j][x]));
      for (std::size_t i = 1; i < state.selected_blocks.size(); ++i)
        CHECK(state.selected_blocks[i] < state.selected_blocks[i - 1]);
      for (const auto& b : state.balls) {
        CHECK(b.R_tilde < b.R);
        CHECK(b.R_tilde >= b.R / (1 + 1 / inst.T.n()) * (1 - 1e-12));
        for (std::size_t x = 0; x < P; ++x) {
          if (b.core[x]) CHECK(b.tilde[x]);
          if (b.D[x]) CHECK(b.core[x]);
        }
      }
      const auto cert = certify_localization(state, inst.space, inst.T, inst.f);
      INFO("seed " << seed);
      CHECK(cert.passed());
      CHECK(cert.C1 == doctest::Approx(16 * (1 + c.K0)));
      CHECK(cert.C2 == doctest::Approx(1 / (2 * c.K0)));
    }
  }

  TEST_CASE("weak ratio level scan") {
    const FiniteMetricMeasureSpace S({{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}}, {1.0, 2.0, 1.0});
    // levels 3, 2, 1: lambda mu({Mf > lambda-}) = 3*1, 2*3, 1*4
    CHECK(weak_ratio(S, {3.0, 2.0, 1.0}, 2.0) == doctest::Approx(3.0));
    const auto probe = weak_norm_probe(S, {1.5, 2.5}, 50, 9);
    CHECK(probe.point_mass_bound >= 1.0);
    CHECK(probe.value() <= discrete_constants(S, 2.0).K1 * 4);
  }

  TEST_CASE("lattice spaces") {
    const auto L = FiniteMetricMeasureSpace::lattice(2, 3);
    CHECK(L.size() == 9);
    CHECK(L.d(0, 8) == doctest::Approx(std::sqrt(8.0)));
    CHECK(L.ball_measure(4, 1.01) == 5.0);
  }
}
