#include "typlab/harness/report_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "typlab/errors.hpp"

namespace typlab::harness {

using nlohmann::json;

namespace {

std::string plot_kind_name(PlotKind k) {
  switch (k) {
    case PlotKind::histogram:
      return "histogram";
    case PlotKind::lines:
      return "lines";
    case PlotKind::trajectories:
      return "trajectories";
  }
  return "lines";
}

PlotKind plot_kind_from(const std::string& s) {
  if (s == "histogram") return PlotKind::histogram;
  if (s == "lines") return PlotKind::lines;
  if (s == "trajectories") return PlotKind::trajectories;
  throw ConfigError("unknown plot kind '" + s + "'");
}

json optional_number(const std::optional<double>& v) { return v ? number_to_json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number_from_json(j.at(key));
}

json metric_to_json(const Metric& m) {
  return json{{"name", m.name},
              {"value", number_to_json(m.value)},
              {"target", optional_number(m.target)},
              {"tolerance", optional_number(m.tolerance)},
              {"ci_low", optional_number(m.ci_low)},
              {"ci_high", optional_number(m.ci_high)},
              {"criterion", to_string(m.criterion)},
              {"pass", m.pass},
              {"note", m.note}};
}

Metric metric_from_json(const json& j) {
  Metric m;
  m.name = j.at("name").get<std::string>();
  m.value = number_from_json(j.at("value"));
  m.target = optional_from(j, "target");
  m.tolerance = optional_from(j, "tolerance");
  m.ci_low = optional_from(j, "ci_low");
  m.ci_high = optional_from(j, "ci_high");
  m.criterion = criterion_from_string(j.at("criterion").get<std::string>());
  m.pass = j.at("pass").get<bool>();
  m.note = j.value("note", std::string{});
  return m;
}

json table_to_json(const DataTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const double v : row) r.push_back(number_to_json(v));
    rows.push_back(std::move(r));
  }
  return json{{"name", t.name}, {"comment", t.comment}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

DataTable table_from_json(const json& j) {
  DataTable t{j.at("name").get<std::string>(), j.at("comment").get<std::string>(),
              j.at("columns").get<std::vector<std::string>>()};
  for (const auto& r : j.at("rows")) {
    std::vector<double> row;
    row.reserve(r.size());
    for (const auto& v : r) row.push_back(number_from_json(v));
    t.add_row(std::move(row));
  }
  return t;
}

json plot_to_json(const PlotSpec& p) {
  return json{{"name", p.name},       {"title", p.title},       {"kind", plot_kind_name(p.kind)},
              {"table", p.table},     {"x_column", p.x_column}, {"y_columns", p.y_columns},
              {"x_label", p.x_label}, {"y_label", p.y_label},   {"log_x", p.log_x},
              {"log_y", p.log_y}};
}

PlotSpec plot_from_json(const json& j) {
  PlotSpec p;
  p.name = j.at("name").get<std::string>();
  p.title = j.at("title").get<std::string>();
  p.kind = plot_kind_from(j.at("kind").get<std::string>());
  p.table = j.at("table").get<std::string>();
  p.x_column = j.at("x_column").get<std::string>();
  p.y_columns = j.at("y_columns").get<std::vector<std::string>>();
  p.x_label = j.at("x_label").get<std::string>();
  p.y_label = j.at("y_label").get<std::string>();
  p.log_x = j.at("log_x").get<bool>();
  p.log_y = j.at("log_y").get<bool>();
  return p;
}

}  // namespace

json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError("expected a number, got " + j.dump());
}

json report_to_json(const ExperimentReport& r) {
  json metrics = json::array();
  for (const auto& m : r.metrics) metrics.push_back(metric_to_json(m));
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back(table_to_json(t));
  json plots = json::array();
  for (const auto& p : r.plots) plots.push_back(plot_to_json(p));
  return json{{"experiment", r.experiment}, {"version", r.version},        {"config", r.config},
              {"all_pass", r.all_pass()},   {"wall_time_s", r.wall_time_s}, {"metrics", std::move(metrics)},
              {"flags", r.flags},           {"tables", std::move(tables)}, {"plots", std::move(plots)}};
}

ExperimentReport report_from_json(const json& j) {
  try {
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.config = j.at("config");
    r.wall_time_s = number_from_json(j.at("wall_time_s"));
    for (const auto& m : j.at("metrics")) r.metrics.push_back(metric_from_json(m));
    r.flags = j.at("flags").get<std::vector<std::string>>();
    for (const auto& t : j.at("tables")) r.tables.push_back(table_from_json(t));
    for (const auto& p : j.at("plots")) r.plots.push_back(plot_from_json(p));
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

void save_report(const std::filesystem::path& path, const ExperimentReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << report_to_json(report).dump(2) << '\n';
}

ExperimentReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace typlab::harness
