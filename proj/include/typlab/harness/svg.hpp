#pragma once

#include <string>

#include "typlab/report.hpp"

namespace typlab::harness {

/// Static SVG rendering of a plot over its table. Log axes skip non-positive
/// values; non-finite values are skipped everywhere.
std::string render_svg(const PlotSpec& plot, const DataTable& table);

}  // namespace typlab::harness
