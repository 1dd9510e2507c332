#include "typlab/report.hpp"

#include <cmath>

#include "typlab/errors.hpp"

namespace typlab {

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::less_than:
      return "less_than";
    case Criterion::at_most:
      return "at_most";
    case Criterion::greater_than:
      return "greater_than";
    case Criterion::within:
      return "within";
    case Criterion::target_in_ci:
      return "target_in_ci";
    case Criterion::holds:
      return "holds";
    case Criterion::informational:
      return "informational";
  }
  return "informational";
}

Criterion criterion_from_string(const std::string& s) {
  for (auto c : {Criterion::less_than, Criterion::at_most, Criterion::greater_than, Criterion::within,
                 Criterion::target_in_ci, Criterion::holds, Criterion::informational}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown metric criterion '" + s + "'");
}

bool evaluate(const Metric& m) {
  switch (m.criterion) {
    case Criterion::less_than:
      return m.tolerance && m.value < *m.tolerance;
    case Criterion::at_most:
      return m.tolerance && m.value <= *m.tolerance;
    case Criterion::greater_than:
      return m.tolerance && m.value > *m.tolerance;
    case Criterion::within:
      return m.target && m.tolerance && std::abs(m.value - *m.target) <= *m.tolerance;
    case Criterion::target_in_ci:
      return m.target && m.ci_low && m.ci_high && *m.ci_low <= *m.target && *m.target <= *m.ci_high;
    case Criterion::holds:
      return m.value != 0.0;
    case Criterion::informational:
      return true;
  }
  return false;
}

namespace {
Metric finish(Metric m) {
  m.pass = evaluate(m);
  return m;
}
}  // namespace

Metric Metric::less_than(std::string name, double value, double bound) {
  Metric m{std::move(name), value};
  m.tolerance = bound;
  m.criterion = Criterion::less_than;
  return finish(m);
}

Metric Metric::at_most(std::string name, double value, double bound) {
  Metric m{std::move(name), value};
  m.tolerance = bound;
  m.criterion = Criterion::at_most;
  return finish(m);
}

Metric Metric::greater_than(std::string name, double value, double bound) {
  Metric m{std::move(name), value};
  m.tolerance = bound;
  m.criterion = Criterion::greater_than;
  return finish(m);
}

Metric Metric::within(std::string name, double value, double target, double tolerance) {
  Metric m{std::move(name), value};
  m.target = target;
  m.tolerance = tolerance;
  m.criterion = Criterion::within;
  return finish(m);
}

Metric Metric::target_in_ci(std::string name, double value, ConfidenceInterval ci, double target) {
  Metric m{std::move(name), value};
  m.target = target;
  m.ci_low = ci.low;
  m.ci_high = ci.high;
  m.criterion = Criterion::target_in_ci;
  return finish(m);
}

Metric Metric::holds(std::string name, bool ok) {
  Metric m{std::move(name), ok ? 1.0 : 0.0};
  m.criterion = Criterion::holds;
  return finish(m);
}

Metric Metric::info(std::string name, double value) {
  Metric m{std::move(name), value};
  m.criterion = Criterion::informational;
  return finish(m);
}

Metric& Metric::with_ci(ConfidenceInterval ci) {
  ci_low = ci.low;
  ci_high = ci.high;
  pass = evaluate(*this);
  return *this;
}

Metric& Metric::with_note(std::string n) {
  note = std::move(n);
  return *this;
}

void DataTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw DomainError("row width does not match table '" + name + "'");
  rows.push_back(std::move(row));
}

bool ExperimentReport::all_pass() const {
  for (const auto& m : metrics) {
    if (!m.pass) return false;
  }
  return true;
}

const Metric* ExperimentReport::metric(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const DataTable* ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

}  // namespace typlab
