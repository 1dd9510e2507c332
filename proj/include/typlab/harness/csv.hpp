#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "typlab/report.hpp"

namespace typlab::harness {

/// Shortest decimal form that parses back to the same double; "inf", "-inf", "nan" otherwise.
std::string format_number(double v);

/// "# comment" line, header row, then one row per record. Output depends only
/// on the table contents.
void write_csv(std::ostream& out, const DataTable& table);
std::string to_csv(const DataTable& table);
void save_csv(const std::filesystem::path& path, const DataTable& table);

/// Parses the format written by write_csv; `name` is taken from the caller.
DataTable parse_csv(const std::string& text, const std::string& name);

}  // namespace typlab::harness
