#include "radmax/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "radmax/error.hpp"

#ifndef RADMAX_VERSION
#define RADMAX_VERSION "0.0.0"
#endif

namespace radmax {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const ExperimentReport::Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_escape(v);
      },
      c);
}

Json cell_json(const ExperimentReport::Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        // JSON has no infinities; keep them readable as strings.
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
        }
        return v;
      },
      c);
}

ExperimentReport::Cell cell_from_json(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string version_tag() { return std::string("radmax-") + RADMAX_VERSION; }

Json quadrature_provenance(const QuadratureConfig& q) {
  Json j;
  j["rel_tol"] = q.rel_tol;
  j["max_subdivisions"] = q.max_subdivisions;
  j["singularity_mode"] =
      q.singularity_mode == SingularityMode::log_substitution ? "log_substitution" : "none";
  j["singular_cutoff"] = q.singular_cutoff;
  j["mc_samples"] = q.mc_samples;
  j["seed"] = q.seed;
  return j;
}

ExperimentReport::ExperimentReport(std::string experiment, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {
  if (experiment_.empty()) throw DomainError("report needs an experiment id");
  if (columns_.empty()) throw DomainError("report needs at least one column");
  provenance_["version"] = version_tag();
}

void ExperimentReport::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw DomainError(experiment_ + ": row has " + std::to_string(row.size()) + " cells, schema has " +
                      std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::string ExperimentReport::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(columns_[i]);
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

Json ExperimentReport::to_json() const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = experiment_;
  j["parameters"] = parameters_;
  j["columns"] = columns_;
  Json rows = Json::array();
  for (const auto& row : rows_) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["provenance"] = provenance_;
  return j;
}

ExperimentReport ExperimentReport::from_json(const Json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) throw ConfigError("unsupported report schema version");
  ExperimentReport r(j.at("experiment").get<std::string>(), j.at("columns").get<std::vector<std::string>>());
  r.parameters_ = j.value("parameters", Json::object());
  r.provenance_ = j.value("provenance", Json::object());
  for (const auto& row : j.at("rows")) {
    std::vector<Cell> cells;
    for (const auto& c : row) cells.push_back(cell_from_json(c));
    r.add_row(std::move(cells));
  }
  return r;
}

std::pair<std::filesystem::path, std::filesystem::path> ExperimentReport::write(
    const std::filesystem::path& dir, const std::string& stamp) const {
  std::filesystem::create_directories(dir);
  const auto base = dir / (experiment_ + "-" + stamp);
  auto csv = base, json = base;
  csv += ".csv";
  json += ".json";
  std::ofstream(csv, std::ios::binary) << to_csv();
  std::ofstream(json, std::ios::binary) << to_json().dump(2) << '\n';
  return {csv, json};
}

}  // namespace radmax
