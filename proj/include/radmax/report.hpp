#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "radmax/quadrature.hpp"

namespace radmax {

using Json = nlohmann::ordered_json;

/// A table of results with the parameters and provenance needed to
/// recompute every row from the library.
class ExperimentReport {
 public:
  using Cell = std::variant<double, long long, std::string, bool>;
  static constexpr int kSchemaVersion = 1;

  ExperimentReport(std::string experiment, std::vector<std::string> columns);

  const std::string& experiment() const { return experiment_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  Json& parameters() { return parameters_; }
  const Json& parameters() const { return parameters_; }
  Json& provenance() { return provenance_; }
  const Json& provenance() const { return provenance_; }

  /// Throws DomainError when the arity differs from the column schema.
  void add_row(std::vector<Cell> row);

  std::string to_csv() const;
  Json to_json() const;
  static ExperimentReport from_json(const Json& j);

  /// Writes <dir>/<experiment>-<stamp>.csv and .json; returns both paths.
  std::pair<std::filesystem::path, std::filesystem::path> write(
      const std::filesystem::path& dir, const std::string& stamp) const;

 private:
  std::string experiment_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  Json parameters_ = Json::object();
  Json provenance_ = Json::object();
};

/// Shortest decimal form that round-trips.
std::string format_double(double x);

/// Version tag stamped into every report.
std::string version_tag();

/// Tolerances, seeds and cutoffs of a quadrature configuration.
Json quadrature_provenance(const QuadratureConfig& q);

}  // namespace radmax
