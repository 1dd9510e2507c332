#pragma once

#include "json.hpp"
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "typlab/numerics/stats.hpp"

namespace typlab {

/// How a metric's pass flag is derived from its stored numbers.
enum class Criterion {
  less_than,        ///< value < tolerance
  at_most,          ///< value <= tolerance
  greater_than,     ///< value > tolerance
  within,           ///< |value - target| <= tolerance
  target_in_ci,     ///< ci_low <= target <= ci_high
  holds,            ///< value != 0 (boolean check stored as 1/0)
  informational,    ///< always passes
};

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

struct Metric {
  std::string name;
  double value = 0.0;
  std::optional<double> target;
  std::optional<double> tolerance;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  Criterion criterion = Criterion::informational;
  bool pass = true;
  std::string note;

  static Metric less_than(std::string name, double value, double bound);
  static Metric at_most(std::string name, double value, double bound);
  static Metric greater_than(std::string name, double value, double bound);
  static Metric within(std::string name, double value, double target, double tolerance);
  static Metric target_in_ci(std::string name, double value, ConfidenceInterval ci, double target);
  static Metric holds(std::string name, bool ok);
  static Metric info(std::string name, double value);

  Metric& with_ci(ConfidenceInterval ci);
  Metric& with_note(std::string n);
};

/// Recomputes the pass flag from the stored values.
bool evaluate(const Metric& m);

/// Rectangular numeric table, written as comma-separated values.
struct DataTable {
  std::string name;
  std::string comment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

enum class PlotKind { histogram, lines, trajectories };

/// Declarative plot over one data table; rendered by the harness.
///
/// histogram: columns[0..1] are bin edges, y_columns are bar heights / overlays.
/// lines: x_column against each of y_columns.
/// trajectories: x_column is time, every y column is one trajectory.
struct PlotSpec {
  std::string name;
  std::string title;
  PlotKind kind = PlotKind::lines;
  std::string table;
  std::string x_column;
  std::vector<std::string> y_columns;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Seed and worker count shared by every experiment run. Results depend on
/// the seed only; the worker count never changes the numbers.
struct RunContext {
  std::uint64_t seed = 1;
  int workers = 1;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Metric> metrics;
  std::vector<std::string> flags;
  std::vector<DataTable> tables;
  std::vector<PlotSpec> plots;
  double wall_time_s = 0.0;
  std::string version;

  bool all_pass() const;
  const Metric* metric(const std::string& name) const;
  const DataTable* table(const std::string& name) const;
};

}  // namespace typlab
