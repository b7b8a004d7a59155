#include <doctest.h>

#include <cmath>

#include "radmax/error.hpp"
#include "radmax/quadrature.hpp"

using namespace radmax;

TEST_SUITE("quadrature") {
  TEST_CASE("smooth integrand") {
    const auto r = integrate_log([](double t) { return -t; }, {{0.0, 50.0}}, {});
    CHECK(r.value.value() == doctest::Approx(-std::expm1(-50.0)).epsilon(1e-11));
    CHECK(r.converged);
  }

  TEST_CASE("integrable endpoint singularities") {
    QuadratureConfig q;
    auto lo = integrate_log([](double t) { return -0.5 * std::log(t); }, {{0.0, 1.0, true, false}}, q);
    CHECK(lo.value.value() == doctest::Approx(2.0).epsilon(1e-9));
    auto hi = integrate_log([](double t) { return -0.9 * std::log(1.0 - t); }, {{0.0, 1.0, false, true}}, q);
    // A few percent of this mass sits within 1e-15 of t = 1, where doubles
    // are spaced 1e-16 apart.
    CHECK(hi.value.value() == doctest::Approx(10.0).epsilon(1e-7));
  }

  TEST_CASE("magnitudes far outside double range") {
    // int_0^1 t^k dt = 1 / (k + 1), with the integrand underflowing almost everywhere.
    const double k = 1e5;
    auto r = integrate_log([k](double t) { return k * std::log(t); }, {{0.0, 1.0}}, {});
    CHECK(r.value.log() == doctest::Approx(-std::log(k + 1.0)).epsilon(1e-10));
    // exp(2000) * int_0^1 dt
    auto big = integrate_log([](double) { return 2000.0; }, {{0.0, 1.0}}, {});
    CHECK(big.value.log() == doctest::Approx(2000.0).epsilon(1e-14));
  }

  TEST_CASE("union of segments") {
    auto r = integrate_log([](double) { return 0.0; }, {{0.0, 1.0}, {2.0, 4.5}}, {});
    CHECK(r.value.value() == doctest::Approx(3.5).epsilon(1e-12));
  }

  TEST_CASE("non-integrable singularity is reported") {
    CHECK_THROWS_AS(integrate_log([](double t) { return -std::log(t); }, {{0.0, 1.0, true, false}}, {}),
                    DivergenceError);
    CHECK_THROWS_AS(integrate_log([](double t) { return -1.5 * std::log(1.0 - t); }, {{0.0, 1.0, false, true}}, {}),
                    DivergenceError);
  }

  TEST_CASE("configuration is validated") {
    QuadratureConfig q;
    q.rel_tol = 0.0;
    CHECK_THROWS_AS(q.validate(), DomainError);
  }
}
