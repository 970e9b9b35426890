#pragma once

// Task implementations shared by the executable and the acceptance runner.
// Every command writes its output (file or stdout) and returns the process
// exit code: 0 success, 2 validation error, 3 non-convergence with partial
// results written and flagged.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>

#include "config.hpp"
#include "figures.hpp"
#include "table.hpp"

namespace pointscatter::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_internal = 1;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_unconverged = 3;

inline int exit_code_for(ErrorCode c) {
  switch (c) {
  case ErrorCode::NoConvergence:
  case ErrorCode::GridTooCoarse: return exit_unconverged;
  case ErrorCode::InternalError: return exit_internal;
  default: return exit_invalid;
  }
}

inline void emit(const RunConfig &cfg, const Table &t) {
  write_text(cfg.out, cfg.format == Format::json ? dump_json(to_json(t)) : to_csv(t));
}

inline ScanSpec scan_spec(const RunConfig &cfg) {
  ScanSpec s;
  s.grid = cfg.grid;
  if (cfg.tol)
    s.energy_tol = *cfg.tol;
  s.cross_validate = cfg.cross_validate;
  s.tol = cfg.tolerances;
  return s;
}

// --- convert ----------------------------------------------------------------

inline int cmd_convert(const RunConfig &cfg, std::ostream &diag = std::cerr) {
  const auto &in = cfg.interaction;
  Table t{{"point", "B", "A0", "A1", "W", "phi", "a", "b", "c", "d", "permeable"}, {}};
  int code = exit_ok;

  const auto add_lambda = [&](long long point, const LambdaParams &p) {
    std::vector<Cell> row{point};
    try {
      const auto s = lambda_to_strengths(p, cfg.tolerances);
      row.insert(row.end(), {s.B(), s.A0(), s.A1(), s.W()});
    } catch (const Error &e) {
      // 2 cos(phi) + a + d = 0: no finite strengths.
      diag << "point " << point << ": " << e.what() << "\n";
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}});
    }
    row.insert(row.end(), {p.phi(), p.a(), p.b(), p.c(), p.d(), true});
    t.add(std::move(row));
  };
  const auto add_strengths = [&](long long point, const PhysicalStrengths &s) {
    const auto val = [&](StrengthField f) -> Cell {
      const double v = s.get(f);
      return s.is_infinite(f) ? Cell{v > 0 ? INFINITY : -INFINITY} : Cell{v};
    };
    std::vector<Cell> row{point, val(StrengthField::B), val(StrengthField::A0),
                          val(StrengthField::A1), val(StrengthField::W)};
    if (is_permeable(s)) {
      const auto p = strengths_to_lambda(s, cfg.tolerances);
      row.insert(row.end(), {p.phi(), p.a(), p.b(), p.c(), p.d(), true});
    } else {
      diag << "point " << point
           << ": ImpermeableInteraction: the strengths have no finite matching matrix\n";
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, false});
      code = exit_invalid;
    }
    t.add(std::move(row));
  };

  switch (in.form) {
  case InteractionSpec::Form::none: throw ConfigError("convert needs an 'interaction' block");
  case InteractionSpec::Form::strengths:
    if (in.parity == Parity::general) {
      add_strengths(1, in.strengths[0]);
      add_strengths(2, in.strengths[1]);
    } else {
      add_strengths(1, in.strengths[0]);
      add_strengths(2, in.parity == Parity::even ? even_partner(in.strengths[0])
                                                 : odd_partner(in.strengths[0]));
    }
    break;
  case InteractionSpec::Form::lambda:
  case InteractionSpec::Form::special_case: {
    const auto arr = build_arrangement(cfg);
    add_lambda(1, arr.lambda1());
    add_lambda(2, arr.lambda2());
    break;
  }
  }
  emit(cfg, t);
  return code;
}

// --- bound states, thresholds -------------------------------------------------

inline int cmd_bound_states(const RunConfig &cfg, std::ostream &diag = std::cerr) {
  const auto arr = build_arrangement(cfg);
  auto scan = scan_spec(cfg);
  Table t{{"energy", "branch", "residual", "status"}, {}};
  try {
    for (const auto &s : find_bound_states(arr, scan).bound_states)
      t.add({s.energy, static_cast<long long>(s.branch), s.residual, std::string("ok")});
    emit(cfg, t);
    return exit_ok;
  } catch (const Error &e) {
    if (e.code() != ErrorCode::GridTooCoarse)
      throw;
    diag << e.what() << "; writing partial results (raise --grid)\n";
  }
  // Partial results: what the scan saw, plus closed-form roots it missed.
  scan.cross_validate = false;
  const auto seen = find_bound_states(arr, scan).bound_states;
  std::vector<std::pair<BoundState, std::string>> rows;
  for (const auto &s : seen)
    rows.emplace_back(s, "unverified");
  for (const auto &s : find_bound_states_closed_form(arr, scan).bound_states) {
    const bool known = std::any_of(seen.begin(), seen.end(), [&](const BoundState &x) {
      return std::abs(x.energy - s.energy) <= 1e-9 * cfg.mass;
    });
    if (!known)
      rows.emplace_back(s, "closed_form_only");
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto &a, const auto &b) { return a.first.energy < b.first.energy; });
  for (const auto &[s, status] : rows)
    t.add({s.energy, static_cast<long long>(s.branch), s.residual, status});
  emit(cfg, t);
  return exit_unconverged;
}

inline int cmd_critical(const RunConfig &cfg, std::ostream & = std::cerr) {
  const auto arr = build_arrangement(cfg);
  Tolerances tol = cfg.tolerances;
  if (cfg.tol)
    tol.threshold_residual = *cfg.tol;
  const auto c = check_critical(arr, tol), s = check_supercritical(arr, tol);
  Table t{{"kind", "energy", "holds", "residual"}, {}};
  t.add({std::string("critical"), cfg.mass, c.holds, c.residual});
  t.add({std::string("supercritical"), -cfg.mass, s.holds, s.residual});
  emit(cfg, t);
  return exit_ok;
}

// --- resonances ---------------------------------------------------------------

inline int cmd_resonances(const RunConfig &cfg, std::ostream & = std::cerr) {
  std::optional<Arrangement> arr;
  try {
    arr = build_arrangement(cfg);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::ImpermeableInteraction)
      throw Error(ErrorCode::RegionOnRealAxisOnly,
                  "impermeable strengths have only real levels; see the box spectrum");
    throw;
  }
  SeedSpec seeds;
  seeds.nx = cfg.seeds_nx;
  seeds.ny = cfg.seeds_ny;
  seeds.pole_tol = cfg.tol.value_or(cfg.tolerances.pole_residual);
  seeds.dedupe = cfg.tolerances.pole_dedupe;
  const auto region = cfg.region.value_or(default_resonance_region(cfg.mass));
  const auto res = find_resonances(*arr, region, seeds);
  Table t{{"E_R", "gamma", "re", "im", "residual", "below_minus_m", "iterations"}, {}};
  for (const auto &p : res.poles)
    t.add({p.E_R, p.gamma, p.E_R, p.energy().imag(), p.residual, p.below_minus_m,
           static_cast<long long>(p.iterations)});
  emit(cfg, t);
  return exit_ok;
}

// --- scattering ---------------------------------------------------------------

inline int cmd_scatter(const RunConfig &cfg, std::ostream & = std::cerr) {
  const auto arr = build_arrangement(cfg);
  const double m = cfg.mass;
  const double lo = cfg.energies.min > 0.0 ? cfg.energies.min : m * (1.0 + 1e-6);
  const double hi = cfg.energies.max > 0.0 ? cfg.energies.max : 6.0 * m;
  if (!(lo > m) || !(hi > lo))
    throw Error(ErrorCode::InvalidInput, "energy grid needs m < min < max");
  const std::size_t n = cfg.energies.count;
  std::vector<double> grid;
  for (std::size_t i = 0; i < n; ++i)
    grid.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  if (cfg.energies.include_negative) {
    std::vector<double> neg;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it)
      neg.push_back(-*it);
    grid.insert(grid.begin(), neg.begin(), neg.end());
  }
  Table t{{"E", "re_r", "im_r", "re_t", "im_t", "R", "T", "unitarity_defect"}, {}};
  for (double E : grid) {
    const auto a = scattering_amplitudes(arr, E, cfg.tolerances);
    t.add({E, a.r.real(), a.r.imag(), a.t.real(), a.t.imag(), a.R, a.T, a.unitarity_defect});
  }
  emit(cfg, t);
  return exit_ok;
}

// --- single-point limit -------------------------------------------------------

inline int cmd_limit(const RunConfig &cfg, std::ostream & = std::cerr) {
  const auto arr = build_arrangement(cfg);
  const auto lim = single_point_limit(arr);
  const auto &M = lim.matrix;
  Table t{{"parity_class", "m11_re", "m11_im", "m12_re", "m12_im", "m21_re", "m21_im", "m22_re",
           "m22_im"},
          {}};
  t.add({std::string(to_string(lim.parity)), M.m11().real(), M.m11().imag(), M.m12().real(),
         M.m12().imag(), M.m21().real(), M.m21().imag(), M.m22().real(), M.m22().imag()});
  emit(cfg, t);
  return exit_ok;
}

// --- non-relativistic check ---------------------------------------------------

inline int cmd_nonrel_check(const RunConfig &cfg, std::ostream & = std::cerr) {
  if (cfg.interaction.form != InteractionSpec::Form::special_case)
    throw ConfigError("nonrel-check needs a special-case interaction");
  std::vector<double> ladder = cfg.strengths_scan;
  if (ladder.empty())
    ladder.push_back(cfg.interaction.special.strength);
  Table t{{"strength", "kind", "status", "n_rel", "n_nr", "ground_rel", "ground_nr", "deviation"},
          {}};
  auto scan = scan_spec(cfg);
  for (double g : ladder) {
    SpecialCaseId id = cfg.interaction.special;
    id.strength = g;
    const auto rep = nonrel_consistency_check(id, cfg.mass, cfg.separation, scan);
    t.add({g, std::string(to_string(rep.kind)), std::string(to_string(rep.status)),
           static_cast<long long>(rep.eps_rel.size()), static_cast<long long>(rep.eps_nr.size()),
           opt_cell(rep.ground_rel), opt_cell(rep.ground_nr), opt_cell(rep.deviation)});
  }
  emit(cfg, t);
  return exit_ok;
}

// --- figures ------------------------------------------------------------------

struct FigureRun {
  int code = exit_ok;
  std::vector<std::filesystem::path> files;
};

/// Regenerates figure `cfg.figure` into the directory `cfg.out` (current
/// directory when empty). JSON format writes a single figureN.json.
inline FigureRun run_figure(const RunConfig &cfg, const FigureOptions &opt = {}) {
  const FigureSpec *spec = find_figure(cfg.figure);
  if (spec == nullptr)
    throw ConfigError("unknown figure id " + std::to_string(cfg.figure) + " (expected 1..10)");
  const std::filesystem::path dir = cfg.out.empty() ? "." : cfg.out;
  std::filesystem::create_directories(dir);
  const FigureData data = figure_data(*spec, opt);

  FigureRun run;
  const std::string base = "figure" + std::to_string(spec->id);
  if (cfg.format == Format::json) {
    nlohmann::ordered_json j;
    j["figure"] = spec->id;
    j["case"] = case_name(spec->parity, spec->kind);
    j["title"] = spec->title;
    if (spec->has_curve())
      j["bound"] = to_json(data.bound);
    if (!spec->pole_strengths.empty())
      j["poles"] = to_json(data.poles);
    if (spec->locus)
      j["locus"] = to_json(data.locus);
    j["anchors"] = to_json(data.anchors);
    run.files.push_back(dir / (base + ".json"));
    write_text(run.files.back().string(), dump_json(j));
    return run;
  }
  const auto put = [&](const std::string &suffix, const Table &t) {
    run.files.push_back(dir / (base + suffix));
    write_text(run.files.back().string(), to_csv(t));
  };
  if (spec->has_curve())
    put("_bound.csv", data.bound);
  if (!spec->pole_strengths.empty())
    put("_poles.csv", data.poles);
  if (spec->locus)
    put("_locus.csv", data.locus);
  put("_anchors.csv", data.anchors);
  return run;
}

inline int cmd_figure(const RunConfig &cfg, std::ostream &diag = std::cerr) {
  FigureOptions opt;
  if (cfg.grid != RunConfig{}.grid)
    opt.samples = cfg.grid;
  const auto run = run_figure(cfg, opt);
  for (const auto &f : run.files)
    diag << "wrote " << f.string() << "\n";
  return run.code;
}

/// Dispatches a task; library and configuration errors become exit codes
/// with a one-line diagnostic.
inline int run_task(const RunConfig &cfg, std::ostream &diag = std::cerr) {
  try {
    switch (cfg.task) {
    case Task::convert: return cmd_convert(cfg, diag);
    case Task::bound_states: return cmd_bound_states(cfg, diag);
    case Task::critical: return cmd_critical(cfg, diag);
    case Task::resonances: return cmd_resonances(cfg, diag);
    case Task::scatter: return cmd_scatter(cfg, diag);
    case Task::figure: return cmd_figure(cfg, diag);
    case Task::limit: return cmd_limit(cfg, diag);
    case Task::nonrel_check: return cmd_nonrel_check(cfg, diag);
    }
  } catch (const ConfigError &e) {
    diag << "config error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const Error &e) {
    diag << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return exit_internal;
}

} // namespace pointscatter::cli
