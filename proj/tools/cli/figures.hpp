#pragma once

// Data behind the ten standard figures (m = 2, l = 1). Each figure is one
// special case; bound-state figures sample a strength interval, resonance
// figures evaluate pole sets at a handful of strengths plus the strength
// independent imaginary-part locus.

#include <filesystem>
#include <string>
#include <vector>

#include "table.hpp"
#include "pointscatter/pointscatter.hpp"

namespace pointscatter::cli {

struct FigureSpec {
  int id = 0;
  Parity parity = Parity::even;
  CaseKind kind = CaseKind::equal_mixture;
  std::string title;
  // Bound-state curve, empty interval when the figure has none.
  double curve_lo = 0.0, curve_hi = 0.0;
  std::vector<double> count_strengths; // anchor rows with the bound-state count
  std::vector<double> pole_strengths;  // plotted pole sets
  bool locus = false;

  bool has_curve() const { return curve_hi > curve_lo; }
};

inline constexpr double figure_mass = 2.0;
inline constexpr double figure_separation = 1.0;

inline const std::vector<FigureSpec> &figure_specs() {
  static const std::vector<FigureSpec> specs{
      {1, Parity::even, CaseKind::equal_mixture, "bound states, even equal mixture",
       -2.0, 0.5, {-1.5, -0.5, -0.1, 0.3}, {}, false},
      {2, Parity::even, CaseKind::equal_mixture, "resonances, even equal mixture",
       0.0, 0.0, {-1.0, -0.1, 0.5}, {-2.0, -1.0, -0.5, -0.1, 0.5, 1.0, 2.0}, true},
      {3, Parity::even, CaseKind::pseudoscalar, "resonances, even pseudoscalar",
       0.0, 0.0, {0.5, 1.5}, {0.5, 1.0, 1.5, 1.9, 1.99}, true},
      {4, Parity::even, CaseKind::scalar, "bound states, even scalar",
       -10.0, 4.0, {-9.0, -5.0, -1.0, -0.3, 0.5, 3.0}, {}, false},
      {5, Parity::even, CaseKind::scalar, "resonances, even scalar",
       0.0, 0.0, {-1.0, -0.3, 1.0}, {-1.9, -1.5, -1.0, -0.5, 0.5, 1.0, 1.5, 1.9}, true},
      {6, Parity::even, CaseKind::electrostatic, "bound states and resonances, even electrostatic",
       -10.0, 10.0, {-5.0, -1.0, -0.3, 0.3, 1.0, 5.0, 10.0}, {0.47, 2.0, 4.0, 8.5}, true},
      {7, Parity::odd, CaseKind::equal_mixture, "bound states, odd equal mixture",
       -3.0, 3.0, {-2.0, -0.5, 0.5, 2.0}, {}, false},
      {8, Parity::odd, CaseKind::equal_mixture, "resonances, odd equal mixture",
       0.0, 0.0, {-1.0, 1.0}, {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}, true},
      {9, Parity::odd, CaseKind::electrostatic, "bound states, odd electrostatic",
       -10.0, 10.0, {-5.0, -1.0, 1.0, 5.0}, {}, false},
      {10, Parity::odd, CaseKind::pseudoscalar, "resonances, odd pseudoscalar",
       0.0, 0.0, {0.5, 1.5}, {0.5, 1.0, 1.5, 1.9}, true},
  };
  return specs;
}

inline const FigureSpec *find_figure(int id) {
  for (const auto &s : figure_specs())
    if (s.id == id)
      return &s;
  return nullptr;
}

struct FigureData {
  Table bound{{"strength", "branch", "energy"}, {}};
  Table poles{{"strength", "re", "im", "gamma", "residual", "below_minus_m"}, {}};
  Table locus{{"curve", "branch", "index", "re", "im"}, {}};
  Table anchors{{"kind", "strength", "value"}, {}};
};

struct FigureOptions {
  std::size_t samples = 401;        // strengths on the bound-state curve
  std::size_t locus_nx = 241, locus_ny = 81;
  SeedSpec seeds{};
};

inline FigureData figure_data(const FigureSpec &spec, const FigureOptions &opt = {}) {
  const double m = figure_mass, l = figure_separation;
  FigureData out;
  const auto arrangement = [&](double g) {
    return instantiate({spec.parity, spec.kind, g}, m, l);
  };

  if (spec.has_curve()) {
    const std::size_t n = std::max<std::size_t>(opt.samples, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const double g = spec.curve_lo + (spec.curve_hi - spec.curve_lo) * static_cast<double>(i) /
                                           static_cast<double>(n - 1);
      std::optional<Arrangement> arr;
      try {
        arr = arrangement(g);
      } catch (const Error &e) {
        if (e.code() == ErrorCode::ImpermeableInteraction)
          continue; // no finite matching matrix at this strength
        throw;
      }
      for (const auto &s : find_bound_states_closed_form(*arr).bound_states)
        out.bound.add({g, static_cast<long long>(s.branch), s.energy});
    }
  }

  const ComplexRegion region = default_resonance_region(m);
  for (double g : spec.pole_strengths) {
    for (const auto &p : find_resonances(arrangement(g), region, opt.seeds).poles)
      out.poles.add({g, p.E_R, p.energy().imag(), p.gamma, p.residual, p.below_minus_m});
  }
  if (spec.locus) {
    const auto curves = trace_imaginary_locus(spec.parity, spec.kind, m, l, region,
                                              opt.locus_nx, opt.locus_ny);
    for (std::size_t c = 0; c < curves.size(); ++c)
      for (std::size_t i = 0; i < curves[c].points.size(); ++i)
        out.locus.add({static_cast<long long>(c), static_cast<long long>(curves[c].branch),
                       static_cast<long long>(i), curves[c].points[i].real(),
                       curves[c].points[i].imag()});
  }

  // Anchors: threshold markers, bound-state counts, pole counts.
  const auto ex = expectations(spec.parity, spec.kind, m, l);
  for (double g : ex.critical_values)
    out.anchors.add({std::string("critical"), g,
                     static_cast<long long>(check_critical(arrangement(g)).holds)});
  for (double g : ex.supercritical_values)
    out.anchors.add({std::string("supercritical"), g,
                     static_cast<long long>(check_supercritical(arrangement(g)).holds)});
  for (double g : spec.count_strengths)
    out.anchors.add({std::string("bound_count"), g,
                     static_cast<long long>(
                         find_bound_states_closed_form(arrangement(g)).bound_states.size())});
  for (double g : spec.pole_strengths) {
    long long n = 0;
    for (const auto &row : out.poles.rows)
      n += std::get<double>(row[0]) == g;
    out.anchors.add({std::string("pole_count"), g, n});
  }
  return out;
}

/// File names written for a figure, in order.
inline std::vector<std::string> figure_files(const FigureSpec &spec) {
  const std::string base = "figure" + std::to_string(spec.id);
  std::vector<std::string> files;
  if (spec.has_curve())
    files.push_back(base + "_bound.csv");
  if (!spec.pole_strengths.empty())
    files.push_back(base + "_poles.csv");
  if (spec.locus)
    files.push_back(base + "_locus.csv");
  files.push_back(base + "_anchors.csv");
  return files;
}

} // namespace pointscatter::cli
