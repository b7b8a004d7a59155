#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "radmax/error.hpp"
#include "radmax/report.hpp"

using namespace radmax;

TEST_SUITE("report") {
  TEST_CASE("csv layout") {
    ExperimentReport r("demo", {"n", "value", "label", "ok"});
    r.add_row({10LL, 0.1, std::string("a,b"), true});
    r.add_row({20LL, std::numeric_limits<double>::infinity(), std::string("say \"hi\""), false});
    CHECK(r.to_csv() == "n,value,label,ok\n10,0.1,\"a,b\",true\n20,inf,\"say \"\"hi\"\"\",false\n");
  }

  TEST_CASE("row arity is enforced") {
    ExperimentReport r("demo", {"a", "b"});
    CHECK_THROWS_AS(r.add_row({1.0}), DomainError);
    CHECK_THROWS_AS(ExperimentReport("", {"a"}), DomainError);
    CHECK_THROWS_AS(ExperimentReport("x", {}), DomainError);
  }

  TEST_CASE("shortest round-trip decimals") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e300) == "1e+300");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    const double third = 1.0 / 3.0;
    CHECK(std::stod(format_double(third)) == third);
  }

  TEST_CASE("json round trip keeps infinities and types") {
    ExperimentReport r("demo", {"n", "value", "label"});
    r.parameters()["alpha"] = 0.5;
    r.add_row({3LL, std::numeric_limits<double>::infinity(), std::string("x")});
    r.add_row({4LL, 2.5, std::string("inf-ish")});
    const Json j = r.to_json();
    CHECK(j["schema_version"] == ExperimentReport::kSchemaVersion);
    CHECK(j["rows"][0][1] == "inf");
    CHECK(j["provenance"]["version"] == version_tag());
    const auto back = ExperimentReport::from_json(j);
    CHECK(back.to_csv() == r.to_csv());
    CHECK(back.parameters()["alpha"] == 0.5);
    Json bad = j;
    bad["schema_version"] = 99;
    CHECK_THROWS_AS(ExperimentReport::from_json(bad), ConfigError);
  }

  TEST_CASE("write produces csv and json files") {
    const auto dir = std::filesystem::temp_directory_path() / "radmax_report_test";
    std::filesystem::remove_all(dir);
    ExperimentReport r("demo", {"x"});
    r.add_row({1.5});
    const auto [csv, json] = r.write(dir, "T0");
    CHECK(csv.filename() == "demo-T0.csv");
    std::ifstream in(csv);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "x\n1.5\n");
    std::ifstream jin(json);
    CHECK(ExperimentReport::from_json(Json::parse(jin)).rows().size() == 1);
    std::filesystem::remove_all(dir);
  }
}
