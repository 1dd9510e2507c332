#include "typlab/subsystems/effective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "typlab/errors.hpp"

namespace typlab::subsystems {

std::string to_string(Detection d) {
  switch (d) {
    case Detection::detected: return "detected";
    case Detection::not_detected: return "not-detected";
    case Detection::undecidable: return "undecidable";
  }
  return "undecidable";
}

EffectiveDecomposition detect_effective_wavefunction(const ComplexField& psi, double y,
                                                     const EffectiveOptions& options,
                                                     std::span<const double> potential) {
  if (!(options.tol_eff >= 0.0) || !(options.tol_res >= 0.0)) throw ConfigError("tolerances must be non-negative");
  const Grid& g = psi.grid();
  if (!potential.empty() && potential.size() != g.size()) throw ConfigError("potential size does not match the grid");
  const ConditionalWaveFunction center = conditional_wavefunction(psi, y, 0.0, options.degenerate_threshold);
  const double dy = g.spacing();
  const auto r = static_cast<long long>(options.radius);

  EffectiveDecomposition out;
  out.score = 1.0;
  for (long long k = -r; k <= r; ++k) {
    if (k == 0) continue;
    try {
      const ConditionalWaveFunction other =
          conditional_wavefunction(psi, y + static_cast<double>(k) * dy, 0.0, options.degenerate_threshold);
      out.score = std::min(out.score, normalized_overlap(center.psi, other.psi));
      ++out.neighbors_used;
    } catch (const DegenerateSliceError&) {
      ++out.neighbors_degenerate;
    }
  }
  if (out.neighbors_used == 0) {
    out.score = 0.0;
    out.status = Detection::undecidable;
    return out;
  }

  // projection chi and the residual over the rows the neighborhood touches
  const std::size_t n = g.points();
  const ComplexField& phi = center.psi;
  std::vector<Complex> chi(n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    Complex c(0.0, 0.0);
    for (std::size_t ix = 0; ix < n; ++ix) c += std::conj(phi[ix]) * psi.at(ix, iy);
    chi[iy] = c * g.spacing();
  }
  const auto base = static_cast<long long>(std::floor((y - g.origin()) / dy));
  double resid = 0.0, total = 0.0;
  std::vector<std::size_t> rows;
  for (long long k = base - r; k <= base + 1 + r; ++k) rows.push_back(g.wrap_index(k));
  for (const std::size_t iy : rows) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const Complex full = psi.at(ix, iy);
      resid += std::norm(full - phi[ix] * chi[iy]);
      total += std::norm(full);
    }
  }
  out.residual_mass = total > 0.0 ? resid / total : 1.0;

  if (!potential.empty()) {
    // doubly centered V under the weight |phi(x)|^2 |chi(y)|^2 on the neighborhood rows
    std::vector<double> wx(n), wy(rows.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t ix = 0; ix < n; ++ix) sx += wx[ix] = std::norm(phi[ix]);
    for (std::size_t j = 0; j < rows.size(); ++j) sy += wy[j] = std::norm(chi[rows[j]]);
    if (sx > 0.0 && sy > 0.0) {
      std::vector<double> mean_over_x(rows.size(), 0.0), mean_over_y(n, 0.0);
      double grand = 0.0;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t ix = 0; ix < n; ++ix) {
          const double v = potential[rows[j] * n + ix];
          const double w = wx[ix] / sx * wy[j] / sy;
          mean_over_x[j] += wx[ix] / sx * v;
          mean_over_y[ix] += wy[j] / sy * v;
          grand += w * v;
        }
      }
      double acc = 0.0;
      for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t ix = 0; ix < n; ++ix) {
          const double c = potential[rows[j] * n + ix] - mean_over_x[j] - mean_over_y[ix] + grand;
          acc += wx[ix] / sx * wy[j] / sy * c * c;
        }
      }
      out.coupling = std::sqrt(acc);
    }
  }

  const bool overlap_ok = out.score > 1.0 - options.tol_eff;
  const bool residual_ok = out.residual_mass < options.tol_res;
  out.status = overlap_ok && residual_ok ? Detection::detected : Detection::not_detected;
  if (out.detected()) {
    out.phi = phi;
    out.chi = std::move(chi);
  }
  return out;
}

ExperimentReport effective_detect_experiment(const EffectiveDetectParams& p, const RunContext&) {
  if (p.s_ladder.size() < 2) throw ConfigError("effective-detect needs at least two correlation widths");
  const Grid grid(2, p.points, p.length);
  ExperimentReport report;
  DataTable table{"detections", "neighborhood overlap score of conditional wave functions (disjoint y-support test)",
                  {"case", "s_over_S", "y", "score", "residual_mass", "detected", "neighbors_used"}};

  auto record = [&](double code, double ratio, double y, const EffectiveDecomposition& d) {
    table.add_row({code, ratio, y, d.score, d.residual_mass, d.detected() ? 1.0 : 0.0,
                   static_cast<double>(d.neighbors_used)});
  };

  const ComplexField product = product_state(grid, {0.0, 0.0}, p.product_sigma);
  const auto dp = detect_effective_wavefunction(product, p.y, p.options);
  record(0.0, 0.0, p.y, dp);
  report.metrics.push_back(Metric::greater_than("product_score", dp.score, p.score_threshold));
  report.metrics.push_back(Metric::holds("product_detected", dp.detected()));

  const ComplexField branches = two_branch_state(grid, p.branch1, p.branch2);
  const auto db = detect_effective_wavefunction(branches, p.branch1.y, p.options);
  record(1.0, 0.0, p.branch1.y, db);
  report.metrics.push_back(Metric::greater_than("two_branch_score", db.score, p.score_threshold));
  report.metrics.push_back(Metric::holds("two_branch_detected", db.detected()));
  if (db.phi) {
    const ComplexField phi1 = gaussian_factor(grid, p.branch1.x, p.branch1.sx);
    report.metrics.push_back(
        Metric::greater_than("two_branch_phi_overlap", normalized_overlap(*db.phi, phi1), p.score_threshold)
            .with_note("|<phi, phi_1>| for Y inside branch 1"));
  }

  std::vector<double> scores;
  for (const double s : p.s_ladder) {
    const ComplexField corr = correlated_gaussian(grid, s, p.big_s);
    const auto dc = detect_effective_wavefunction(corr, p.y, p.options);
    record(2.0, s / p.big_s, p.y, dc);
    scores.push_back(dc.score);
    char label[48];
    std::snprintf(label, sizeof label, "correlated_score_s/S=%.4g", s / p.big_s);
    report.metrics.push_back(Metric::info(label, dc.score).with_note(to_string(dc.status)));
  }
  // scores must fall as s/S shrinks along the ladder
  bool monotone = true;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const bool shrinking = p.s_ladder[i] < p.s_ladder[i - 1];
    monotone = monotone && (shrinking ? scores[i] < scores[i - 1] : scores[i] > scores[i - 1]);
  }
  report.metrics.push_back(Metric::holds("correlated_score_monotone", monotone));

  report.tables.push_back(std::move(table));
  report.plots.push_back({"detections", "Overlap score by case", PlotKind::lines, "detections", "s_over_S",
                          {"score"}, "s/S (0 for controls)", "score"});
  return report;
}

}  // namespace typlab::subsystems
