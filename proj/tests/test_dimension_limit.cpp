#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include "radmax/dimension_limit.hpp"
#include "radmax/error.hpp"

using namespace radmax;

TEST_SUITE("dimension_limit") {
  TEST_CASE("schedule") {
    CHECK(geometric_schedule() == std::vector<int>{10, 40, 160, 640, 2000});
    CHECK(geometric_schedule(2, 2, 16) == std::vector<int>{2, 4, 8, 16});
  }

  TEST_CASE("kernel concentrates at T") {
    for (auto [s, R] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}}) {
      const BallSpec spec(2000, s, R);
      const auto c = approx_identity_certificate(spec, 0.1 * spec.T());
      INFO("s=" << s);
      CHECK(c.mass_error < 1e-9);
      CHECK(c.tail() < 1e-6);
      CHECK(c.decreasing_beyond_T);
      CHECK(c.double_estimate_violation <= 1e-9);
    }
  }

  TEST_CASE("averages of t^2 converge to T^2") {
    LimitExperiment exp{RadialDensity::power(2.0), {{0.0, 1.0}, {2.0, 0.5}}, {10, 100, 1000}, {1.0, 0.1, 0.01}, {}};
    const auto table = limit_table(exp, Exec::serial);
    CHECK(table.passed);
    for (const auto& row : table.rows)
      CHECK(row.average == doctest::Approx(row.s * row.s + row.n * row.R * row.R / (row.n + 2.0)).epsilon(1e-9));
  }

  TEST_CASE("singular T is rejected") {
    LimitExperiment exp{RadialDensity::shell(0.5), {{0.0, 1.0}}, {10}, {}, {}};
    CHECK_THROWS_AS(exp.validate(), DomainError);
  }

  TEST_CASE("growth fits recover synthetic exponents") {
    std::vector<double> x, yp, ye;
    for (int n = 10; n <= 200; n += 10) {
      x.push_back(n);
      yp.push_back(3.0 * std::pow(n, 0.5));
      ye.push_back(0.2 * std::pow(1.3, n));
    }
    const auto p = fit_growth(x, yp, GrowthModel::power);
    CHECK(p.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::exp(p.intercept) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(p.r_squared == doctest::Approx(1.0));
    const auto e = fit_growth(x, ye, GrowthModel::exponential);
    CHECK(e.rate() == doctest::Approx(1.3).epsilon(1e-12));
    CHECK(e.asserted());

    std::mt19937 rng(1);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<double> yn;
    for (double v : x) yn.push_back(std::pow(v, 1.5) * std::exp(noise(rng)));
    const auto q = fit_growth(x, yn, GrowthModel::power);
    CHECK(q.band_lo <= 1.5);
    CHECK(q.band_hi >= 1.5);

    const auto [wx, wy] = fit_window(x, yp, 100.0);
    CHECK(wx.front() == 100.0);
    CHECK(wx.size() == wy.size());
    CHECK(fit_window(x, yp, std::nullopt).first.size() == 10);
  }

  TEST_CASE("shell ratios follow the Beta closed form") {
    ShellOptions opt;
    opt.dimensions = {10, 100, 1000};
    const auto r = shell_counterexample(0.5, opt, Exec::serial);
    for (std::size_t i = 0; i < r.dimensions.size(); ++i) {
      const double n = r.dimensions[i];
      const double exact = std::exp(std::lgamma(n + 1) + std::lgamma(0.5) - std::lgamma(n + 0.5));
      CHECK(r.centered_ratio[i] == doctest::Approx(exact).epsilon(1e-9));
    }
    CHECK(r.limit_target == doctest::Approx(std::pow(std::sqrt(2.0) - 1.0, -0.5)));
    CHECK(r.report.rows().size() == 3);
  }

  TEST_CASE("power family needs alpha below one") {
    CHECK_THROWS_AS(power_family_experiment(1.0), DomainError);
    PowerFamilyOptions opt;
    opt.dimensions = {10, 20, 30, 40};
    const auto r = power_family_experiment(0.7, opt, Exec::serial);
    CHECK(r.delta_bound.size() == 4);
    CHECK(std::is_sorted(r.delta_bound.begin(), r.delta_bound.end()));
  }
}
