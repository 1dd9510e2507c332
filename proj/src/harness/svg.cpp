#include "typlab/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "typlab/errors.hpp"

namespace typlab::harness {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 450.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::size_t column(const DataTable& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) throw DomainError("table '" + t.name + "' has no column '" + name + "'");
  return static_cast<std::size_t>(it - t.columns.begin());
}

/// One plotted axis: maps data to pixels, linear or log10.
struct Axis {
  bool log = false;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double t(double v) const { return log ? std::log10(v) : v; }
  void include(double v) {
    if (!usable(v)) return;
    lo = std::min(lo, t(v));
    hi = std::max(hi, t(v));
  }
  bool empty() const { return !(hi >= lo); }
  void finish() {
    if (empty()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo < 1e-300 + 1e-12 * std::abs(hi)) {
      const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
      lo -= pad;
      hi += pad;
    } else if (!log) {
      const double pad = 0.04 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
  double frac(double v) const { return (t(v) - lo) / (hi - lo); }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int a = static_cast<int>(std::ceil(lo - 1e-9));
      const int b = static_cast<int>(std::floor(hi + 1e-9));
      const int step = std::max(1, (b - a) / 6 + 1);
      for (int k = a; k <= b; k += step) out.push_back(std::pow(10.0, k));
      if (out.empty()) out.push_back(std::pow(10.0, 0.5 * (lo + hi)));
      return out;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
  }
};

struct Frame {
  Axis x;
  Axis y;
  double px(double v) const { return kLeft + x.frac(v) * (kWidth - kLeft - kRight); }
  double py(double v) const { return kHeight - kBottom - y.frac(v) * (kHeight - kTop - kBottom); }
};

void polyline(std::ostringstream& out, const Frame& f, const std::vector<std::pair<double, double>>& pts,
              const char* color, double width, bool markers) {
  // Unusable points break the line into segments.
  std::string seg;
  auto flush = [&] {
    if (!seg.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\" points=\""
          << seg << "\"/>\n";
    }
    seg.clear();
  };
  for (const auto& [x, y] : pts) {
    if (!f.x.usable(x) || !f.y.usable(y)) {
      flush();
      continue;
    }
    seg += fmt(f.px(x)) + "," + fmt(f.py(y)) + " ";
    if (markers) {
      out << "<circle cx=\"" << fmt(f.px(x)) << "\" cy=\"" << fmt(f.py(y)) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
  }
  flush();
}

}  // namespace

std::string render_svg(const PlotSpec& plot, const DataTable& table) {
  const std::size_t xi = column(table, plot.x_column);
  std::vector<std::size_t> yi;
  for (const auto& c : plot.y_columns) yi.push_back(column(table, c));

  // Histogram bins are [x_column, next column) when that column is "bin_hi"/"x_hi", else consecutive x values.
  std::vector<std::pair<double, double>> bins;
  if (plot.kind == PlotKind::histogram) {
    std::optional<std::size_t> hi_col;
    if (xi + 1 < table.columns.size()) {
      const std::string& next = table.columns[xi + 1];
      if (next.size() >= 2 && next.compare(next.size() - 2, 2, "hi") == 0) hi_col = xi + 1;
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double lo = table.rows[r][xi];
      double hi = lo;
      if (hi_col) {
        hi = table.rows[r][*hi_col];
      } else if (r + 1 < table.rows.size()) {
        hi = table.rows[r + 1][xi];
      } else if (r > 0) {
        hi = lo + (lo - table.rows[r - 1][xi]);
      }
      bins.emplace_back(lo, hi);
    }
  }

  Frame f;
  f.x.log = plot.log_x;
  f.y.log = plot.log_y;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    f.x.include(table.rows[r][xi]);
    if (!bins.empty()) f.x.include(bins[r].second);
    for (const auto c : yi) f.y.include(table.rows[r][c]);
  }
  if (plot.kind == PlotKind::histogram && !plot.log_y) f.y.include(0.0);
  const bool no_data = f.x.empty() || f.y.empty();
  f.x.finish();
  f.y.finish();

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
      << "</text>\n";

  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  for (const double t : f.x.ticks()) {
    const double p = f.px(t);
    out << "<line x1=\"" << fmt(p) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(p) << "\" y2=\"" << fmt(y1)
        << "\" stroke=\"#e6e6e6\"/>\n";
    out << "<text x=\"" << fmt(p) << "\" y=\"" << fmt(y0 + 16) << "\" text-anchor=\"middle\">" << tick_label(t)
        << "</text>\n";
  }
  for (const double t : f.y.ticks()) {
    const double p = f.py(t);
    out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(p) << "\" x2=\"" << fmt(x1) << "\" y2=\"" << fmt(p)
        << "\" stroke=\"#e6e6e6\"/>\n";
    out << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(p + 4) << "\" text-anchor=\"end\">" << tick_label(t)
        << "</text>\n";
  }
  out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y1) << "\" width=\"" << fmt(x1 - x0) << "\" height=\""
      << fmt(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt(kHeight - 18) << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << (plot.log_x ? " (log)" : "") << "</text>\n";
  out << "<text transform=\"translate(20," << fmt((y0 + y1) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(plot.y_label) << (plot.log_y ? " (log)" : "") << "</text>\n";

  if (no_data) {
    out << "<text x=\"" << fmt((x0 + x1) / 2) << "\" y=\"" << fmt((y0 + y1) / 2)
        << "\" text-anchor=\"middle\" fill=\"#888\">no plottable data</text>\n";
  } else if (plot.kind == PlotKind::histogram) {
    const double base = plot.log_y ? std::pow(10.0, f.y.lo) : 0.0;
    for (std::size_t k = 0; k < yi.size(); ++k) {
      const char* color = kPalette[k % std::size(kPalette)];
      if (k == 0) {
        for (std::size_t r = 0; r < bins.size(); ++r) {
          const double v = table.rows[r][yi[k]];
          if (!f.x.usable(bins[r].first) || !f.x.usable(bins[r].second) || !f.y.usable(v)) continue;
          const double left = f.px(bins[r].first);
          const double right = f.px(bins[r].second);
          const double top = f.py(v);
          out << "<rect x=\"" << fmt(std::min(left, right)) << "\" y=\"" << fmt(std::min(top, f.py(base)))
              << "\" width=\"" << fmt(std::abs(right - left)) << "\" height=\"" << fmt(std::abs(f.py(base) - top))
              << "\" fill=\"" << color << "\" fill-opacity=\"0.45\" stroke=\"" << color << "\"/>\n";
        }
      } else {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t r = 0; r < bins.size(); ++r) {
          pts.emplace_back(bins[r].first, table.rows[r][yi[k]]);
          pts.emplace_back(bins[r].second, table.rows[r][yi[k]]);
        }
        polyline(out, f, pts, color, 2.0, false);
      }
    }
  } else {
    const bool bundle = plot.kind == PlotKind::trajectories;
    for (std::size_t k = 0; k < yi.size(); ++k) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& row : table.rows) pts.emplace_back(row[xi], row[yi[k]]);
      polyline(out, f, pts, kPalette[k % std::size(kPalette)], bundle ? 1.0 : 1.8, !bundle && table.rows.size() <= 40);
    }
  }

  // Legend, capped so large trajectory bundles stay readable.
  const std::size_t shown = std::min<std::size_t>(yi.size(), 12);
  for (std::size_t k = 0; k < shown; ++k) {
    const double y = kTop + 10 + 18.0 * static_cast<double>(k);
    out << "<rect x=\"" << fmt(x1 + 12) << "\" y=\"" << fmt(y - 9) << "\" width=\"14\" height=\"10\" fill=\""
        << kPalette[k % std::size(kPalette)] << "\"/>\n";
    out << "<text x=\"" << fmt(x1 + 32) << "\" y=\"" << fmt(y) << "\">" << escape(plot.y_columns[k]) << "</text>\n";
  }
  if (shown < yi.size()) {
    out << "<text x=\"" << fmt(x1 + 12) << "\" y=\"" << fmt(kTop + 10 + 18.0 * static_cast<double>(shown))
        << "\">+" << (yi.size() - shown) << " more</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace typlab::harness
