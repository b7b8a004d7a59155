#include <doctest.h>

#include <cmath>

#include "radmax/weights.hpp"

using namespace radmax;

namespace {

SweepGrid small_grid() {
  SweepGrid g;
  g.R_count = 12;
  g.refinement_depth = 1;
  return g;
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("dyadic oscillation of powers") {
    const SweepGrid g;
    for (double a : {-0.5, 0.5, 1.0, 2.0})
      CHECK(dyadic_oscillation(RadialDensity::power(a), g).value == doctest::Approx(std::pow(2.0, std::fabs(a))).epsilon(1e-9));
    CHECK(dyadic_oscillation(RadialDensity::constant(2.0), g).value == 1.0);
  }

  TEST_CASE("Lebesgue doubling constants are exact") {
    const auto one = RadialDensity::constant(1.0);
    for (int n : {3, 20}) {
      const auto p = doubling_profile(one, n, small_grid());
      CHECK(p.micro.value == doctest::Approx(std::pow(1.0 + 1.0 / n, n)).epsilon(1e-9));
      CHECK(p.weak.value == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(p.strong.value == doctest::Approx(p.micro.value).epsilon(1e-9));
    }
  }

  TEST_CASE("strong constant factors through micro and weak") {
    for (const auto& w : {RadialDensity::shell(0.5), RadialDensity::power(0.5), RadialDensity::exp_decay()}) {
      const auto p = doubling_profile(w, 12, small_grid());
      INFO(w.name());
      CHECK(p.strong.value <= p.micro.value * p.weak.value * (1.0 + 1e-12));
      CHECK(p.micro.value >= 1.0);
    }
  }

  TEST_CASE("serial and parallel sweeps agree") {
    const auto w = RadialDensity::shell(0.5);
    const auto a = doubling_profile(w, 30, small_grid(), {}, Exec::serial);
    const auto b = doubling_profile(w, 30, small_grid(), {}, Exec::parallel);
    CHECK(a.micro.value == b.micro.value);
    CHECK(a.weak.value == b.weak.value);
    CHECK(a.strong.value == b.strong.value);
  }

  TEST_CASE("Muckenhoupt characteristics") {
    const auto g = small_grid();
    CHECK(ap_constant(RadialDensity::constant(1.0), 5, 2.0, g).value == doctest::Approx(1.0));
    CHECK_FALSE(ap_constant(RadialDensity::power(2.0), 2, 2.0, g).finite());
    const double a = ap_constant(RadialDensity::power(-0.5), 16, 2.0, g).value;
    CHECK(a > 1.0);
    CHECK(a < 1.1);
    CHECK(a1_constant(RadialDensity::power(-0.5), 16, g).finite());
    CHECK_FALSE(a1_constant(RadialDensity::power(1.0), 16, g).finite());
  }

  TEST_CASE("origin-ball bound for t: ratio n / (n + 1)") {
    // mu(B_R) = |S| R^(n+1) / (n+1), w0(R)|B_R| = |S| R^(n+1) / n
    const auto h = hardy_upper_check(RadialDensity::power(1.0), 8, small_grid());
    CHECK(h.worst_ratio == doctest::Approx(8.0 / 9.0).epsilon(1e-9));
    CHECK(h.holds);
    CHECK(h.threshold_dimension == 2);
  }

  TEST_CASE("comparability with a decreasing function") {
    CHECK(decreasing_comparability(RadialDensity::exp_decay()).comparable);
    CHECK(decreasing_comparability(RadialDensity::exp_decay()).q == doctest::Approx(1.0));
    CHECK_FALSE(decreasing_comparability(RadialDensity::power(1.0)).comparable);
  }
}
