#include <doctest.h>

#include <cmath>

#include "radmax/error.hpp"
#include "radmax/radial_geometry.hpp"

using namespace radmax;

namespace {

double log_unit_ball(int n) { return 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0); }

// Directions theta with t theta in B(s e_1, R): arc length in the plane, cap area in 3-space.
double cap_oracle(int n, double s, double R, double t) {
  const double c = (s * s + t * t - R * R) / (2.0 * s * t);
  const double alpha = c <= -1.0 ? M_PI : c >= 1.0 ? 0.0 : std::acos(c);
  return n == 2 ? 2.0 * alpha : 2.0 * M_PI * (1.0 - std::cos(alpha));
}

}  // namespace

TEST_SUITE("radial_geometry") {
  TEST_CASE("ball volume closed form") {
    for (int n : {1, 2, 3, 10, 1000, 100000})
      for (double R : {0.1, 1.0, 7.0}) {
        INFO("n=" << n << " R=" << R);
        CHECK(log_ball_volume(n, R).log() == doctest::Approx(log_unit_ball(n) + n * std::log(R)).epsilon(1e-13));
      }
    CHECK(std::exp(log_sphere_surface(3).log()) == doctest::Approx(4.0 * M_PI));
  }

  TEST_CASE("Lebesgue measure of shifted balls") {
    const auto one = RadialDensity::constant(1.0);
    for (int n : {2, 10, 100, 1000})
      for (double R : {0.1, 1.0, 10.0})
        for (double s : {0.0, R / 2, R, 3 * R}) {
          INFO("n=" << n << " s=" << s << " R=" << R);
          const double err = ball_measure(one, BallSpec(n, s, R)).log() - log_ball_volume(n, R).log();
          CHECK(std::fabs(err) < 1e-9);
        }
  }

  TEST_CASE("cap measure in the plane and in 3-space") {
    for (int n : {2, 3})
      for (double t : {0.2, 0.9, 1.4, 2.3}) {
        const BallSpec spec(n, 1.3, 1.1);
        INFO("n=" << n << " t=" << t);
        CHECK(std::exp(cap_measure(spec, t).log()) == doctest::Approx(cap_oracle(n, 1.3, 1.1, t)).epsilon(1e-10));
      }
  }

  TEST_CASE("t^2 average has a closed form") {
    const auto sq = RadialDensity::power(2.0);
    for (int n : {2, 7, 100, 2000})
      for (auto [s, R] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {3.0, 0.5}}) {
        INFO("n=" << n << " s=" << s);
        CHECK(ball_average(sq, BallSpec(n, s, R)) == doctest::Approx(s * s + n * R * R / (n + 2.0)).epsilon(1e-10));
      }
  }

  TEST_CASE("kernel has unit mass") {
    const auto one = RadialDensity::constant(1.0);
    for (int n : {3, 50, 800}) {
      const BallSpec spec(n, 1.0, 1.0);
      CHECK(ball_average(one, spec) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(kernel_phi(spec, spec.T()) > 0.0);
    }
  }

  TEST_CASE("Monte Carlo agrees within four standard errors") {
    for (const auto& w : {RadialDensity::shell(0.5), RadialDensity::power(-0.5), RadialDensity::exp_decay()})
      for (auto [n, s] : {std::pair{2, 0.5}, {5, 1.0}, {8, 0.0}}) {
        const BallSpec spec(n, s, 1.0);
        const auto mc = mc_ball_measure(w, spec);
        const double exact = ball_measure(w, spec).value();
        INFO(w.name() << " n=" << n << " s=" << s);
        CHECK(std::fabs(mc.estimate - exact) < 4.0 * mc.std_error + 1e-12 * exact);
      }
  }

  TEST_CASE("shell density: the centered ratio has a Beta closed form") {
    const auto shell = RadialDensity::shell(0.5);
    for (int n : {10, 200, 2000}) {
      // n int_0^1 (1 - t)^(-a) t^(n-1) dt = n B(n, 1 - a)
      const double exact = std::exp(std::log(n) + std::lgamma(n) + std::lgamma(0.5) - std::lgamma(n + 0.5));
      CHECK(ball_average(shell, BallSpec(n, 0.0, 1.0)) == doctest::Approx(exact).epsilon(1e-9));
    }
  }

  TEST_CASE("divergence and domain errors") {
    CHECK_THROWS_AS(ball_measure(RadialDensity::power(-3.0), BallSpec(2, 0.0, 1.0)), DivergenceError);
    CHECK_NOTHROW(ball_measure(RadialDensity::power(-3.0), BallSpec(4, 0.0, 1.0)));
    CHECK_THROWS_AS(BallSpec(0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(BallSpec(3, 0.0, -1.0), DomainError);
  }
}
