#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "radmax/expression.hpp"

using namespace radmax;

namespace {

std::string random_expr(std::mt19937& rng, int depth) {
  const int pick = depth <= 0 ? static_cast<int>(rng() % 3) : static_cast<int>(rng() % 9);
  switch (pick) {
    case 0: return "t";
    case 1: return std::to_string(1 + rng() % 9) + ".5";
    case 2: return "shell(0.25)";
    case 3: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
    case 5: return "(" + random_expr(rng, depth - 1) + ")/(" + random_expr(rng, depth - 1) + ")";
    case 6: return "(" + random_expr(rng, depth - 1) + ")^-1.5";
    case 7: return "exp(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
    default: return "abs(" + random_expr(rng, depth - 1) + " - 3)";
  }
}

}  // namespace

TEST_SUITE("expression") {
  TEST_CASE("examples") {
    CHECK(parse_density("1").eval(0.3) == 1.0);
    CHECK(parse_density("t^2 + 1").eval(2.0) == doctest::Approx(5.0));
    CHECK(parse_density("shell(0.5)").eval(0.75) == doctest::Approx(std::pow(0.25, -0.5)));
    CHECK(parse_density("exp(0-t)").eval(3.0) == doctest::Approx(std::exp(-3.0)));
    CHECK(parse_density("1/(1+t^2)").eval(2.0) == doctest::Approx(0.2));
    CHECK(parse_density("power(-0.5)").eval(4.0) == doctest::Approx(0.5));
    CHECK(parse_density("2 - t - 1").eval(0.5) == doctest::Approx(0.5));
    CHECK(parse_density("8/t/2").eval(2.0) == doctest::Approx(2.0));
  }

  TEST_CASE("canonical printing") {
    CHECK(parse_density("t^2+1").print() == "t^2 + 1");
    CHECK(parse_density("((t))").print() == "t");
    CHECK(parse_density("2*(t+1)").print() == "2 * (t + 1)");
    CHECK(parse_density("t-(t-1)").print() == "t - (t - 1)");
    CHECK(parse_density("1e-3 * t").print() == "0.001 * t");
  }

  TEST_CASE("print and parse round-trip on random expressions") {
    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
      const std::string text = random_expr(rng, 4);
      const auto e = parse_density(text);
      const std::string once = e.print();
      INFO(text);
      CHECK(parse_density(once).print() == once);
      for (double t : {0.3, 1.7, 4.0}) {
        const double a = e.eval(t), b = parse_density(once).eval(t);
        if (std::isfinite(a)) CHECK(b == doctest::Approx(a).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("log evaluation survives extreme exponents") {
    const auto e = parse_density("power_family(0.7)");
    CHECK(e.depends_on_dimension());
    CHECK(e.log_eval(2.0, 100000) == doctest::Approx(-0.7 * 100000 * std::log(2.0)));
    const auto sum = parse_density("t^-800 + t^-900");
    CHECK(sum.log_eval(10.0) == doctest::Approx(-800 * std::log(10.0)).epsilon(1e-12));
    CHECK(parse_density("exp(0 - t)").log_eval(5000.0) == doctest::Approx(-5000.0));
  }

  TEST_CASE("negative profiles are rejected at evaluation") {
    CHECK_THROWS_AS(parse_density("1 - t").log_eval(2.0), DomainError);
  }

  TEST_CASE("syntax errors carry the byte offset") {
    auto offset_of = [](const char* text) -> long {
      try {
        parse_density(text);
      } catch (const ParseError& e) {
        return static_cast<long>(e.offset());
      }
      return -1;
    };
    CHECK(offset_of("") == 0);
    CHECK(offset_of("t^") == 2);
    CHECK(offset_of("t + * 2") == 4);
    CHECK(offset_of("(t") == 2);
    CHECK(offset_of("t 2") == 2);
    CHECK(offset_of("2 * foo(1)") == 4);
    CHECK(offset_of("shell(1.5)") == 6);
    CHECK_THROWS_AS(parse_density("cosh(t)"), ConfigError);
  }

  TEST_CASE("traits of the resulting density") {
    CHECK(*parse_density("3 * t^-1.5").homogeneity() == doctest::Approx(-1.5));
    CHECK_FALSE(parse_density("t + 1").homogeneity().has_value());
    CHECK(parse_density("3 * t^-1.5").density().integrability_floor() == 2);
    CHECK(parse_density("t^-2.5 + 1").density().integrability_floor() == 3);
    CHECK(parse_density("shell(0.5) * t").density().singular_points() == std::vector<double>{1.0});
    CHECK(parse_density("power_family(0.5)").density(40).homogeneity().value() == doctest::Approx(-20.0));
    CHECK_THROWS_AS(parse_density("power_family(0.5)").density(), DomainError);
    CHECK(parse_density("shell(0.5)").density().name() == "shell(0.5)");
  }
}
