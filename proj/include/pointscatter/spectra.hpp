#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "pointscatter/roots.hpp"
#include "pointscatter/transfer_core.hpp"

namespace pointscatter {

struct ScanSpec {
  std::size_t grid = 4096;
  double endpoint_eps = 1e-6; // in units of m
  double energy_tol = 1e-12;  // bisection stop, in units of m
  bool cross_validate = false;
  unsigned threads = 0;       // 0: default_thread_count()
  Tolerances tol = default_tolerances;
};

struct BoundState {
  double energy = 0.0;
  double residual = 0.0;
  int branch = 0; // +1 / -1 when the closed-form sign branch is unambiguous
};

enum class SpectrumMethod { general, even_closed_form, odd_closed_form };

constexpr const char *to_string(SpectrumMethod m) {
  switch (m) {
  case SpectrumMethod::general: return "general";
  case SpectrumMethod::even_closed_form: return "even_closed_form";
  case SpectrumMethod::odd_closed_form: return "odd_closed_form";
  }
  return "?";
}

struct ThresholdCheck {
  bool holds = false;
  double residual = 0.0;
};

struct SpectrumReport {
  std::vector<BoundState> bound_states;
  ThresholdCheck critical;
  ThresholdCheck supercritical;
  SpectrumMethod method = SpectrumMethod::general;
};

// ---------------------------------------------------------------------------
// Threshold states

namespace detail {

/// Closed forms of M^crit_12 and M^super_12 for parity-tagged arrangements,
/// written in the parameters of the point at -l/2.
inline cplx closed_form_critical(const Arrangement &arr) {
  const LambdaParams &p = arr.lambda1();
  const double ml = arr.mass() * arr.separation();
  const cplx i(0.0, 1.0);
  if (arr.parity() == Parity::even)
    return -2.0 * i * p.c() * (p.a() + p.c() * ml);
  return i * p.c() * std::polar(1.0, 2.0 * p.phi()) * (p.a() - p.d() + 2.0 * p.c() * ml);
}

inline cplx closed_form_supercritical(const Arrangement &arr) {
  const LambdaParams &p = arr.lambda1();
  const double ml = arr.mass() * arr.separation();
  const cplx i(0.0, 1.0);
  if (arr.parity() == Parity::even)
    return 2.0 * i * p.b() * (p.d() + p.b() * ml);
  return i * p.b() * std::polar(1.0, 2.0 * p.phi()) * (p.a() - p.d() - 2.0 * p.b() * ml);
}

inline ThresholdCheck threshold_check(const Arrangement &arr, const CMat2 &mt,
                                      cplx closed, const Tolerances &tol,
                                      const char *what) {
  const cplx general = mt.m12();
  if (arr.parity() != Parity::general) {
    const double scale = std::max(1.0, max_abs(mt));
    if (std::abs(general - closed) > tol.closed_form * scale)
      throw Error(ErrorCode::InternalError,
                  std::string(what) + " closed form disagrees with the transfer matrix");
  }
  const double r = std::abs(general);
  return {r < tol.threshold_residual, r};
}

} // namespace detail

inline ThresholdCheck check_critical(const Arrangement &arr,
                                     const Tolerances &tol = default_tolerances) {
  return detail::threshold_check(arr, critical_transfer(arr).matrix,
                                 arr.parity() == Parity::general
                                     ? cplx{}
                                     : detail::closed_form_critical(arr),
                                 tol, "critical");
}

inline ThresholdCheck check_supercritical(const Arrangement &arr,
                                          const Tolerances &tol = default_tolerances) {
  return detail::threshold_check(arr, supercritical_transfer(arr).matrix,
                                 arr.parity() == Parity::general
                                     ? cplx{}
                                     : detail::closed_form_supercritical(arr),
                                 tol, "supercritical");
}

// ---------------------------------------------------------------------------
// Bound states

/// M_22 at k = i kappa with the constant phase e^{i(phi1 + phi2)} removed.
/// The result is real for self-adjoint data; the imaginary remainder is
/// checked against the phase guard.
inline double bound_function(const Arrangement &arr, double E,
                             const Tolerances &tol = default_tolerances) {
  const double m = arr.mass();
  const cplx k(0.0, gap_kappa(E, m));
  const CMat2 M = transfer_matrix_k(arr, k, cplx(E, 0.0));
  const cplx f = M.m22() * std::polar(1.0, -arr.phase_sum());
  if (std::abs(f.imag()) > tol.phase_guard * std::max(1.0, max_abs(M)))
    throw Error(ErrorCode::InternalError,
                "phase-removed bound residual is not real");
  return f.real();
}

/// Closed-form residuals for parity-tagged arrangements, normalised by the
/// magnitude of their terms. Even: one value per sign branch. Odd: a single
/// value (stored twice).
inline std::array<double, 2> closed_form_bound_residuals(const Arrangement &arr,
                                                         double E) {
  const LambdaParams &p = arr.lambda1();
  const double m = arr.mass(), l = arr.separation();
  const double kappa = gap_kappa(E, m);
  const double kb = kappa * p.b() / (m + E);
  const double ck = (m + E) * p.c() / kappa;
  if (arr.parity() == Parity::even) {
    const double grow = std::exp(kappa * l);
    const double x = (p.a() + p.d() + kb + ck) * grow;
    const double y = p.a() - p.d() + kb - ck;
    const double scale = std::max(1e-300, std::abs(x) + std::abs(y));
    return {(x - y) / scale, (x + y) / scale};
  }
  if (arr.parity() == Parity::odd) {
    const double y = p.a() - p.d() + kb - ck;
    const double z = kb + ck;
    const double t1 = y * y * std::exp(-2.0 * kappa * l);
    const double t2 = z * z;
    const double t3 = (p.a() + p.d()) * (p.a() + p.d());
    const double r = (t1 - t2 + t3) / std::max(1e-300, t1 + t2 + t3);
    return {r, r};
  }
  throw Error(ErrorCode::InvalidInput, "closed forms need a parity-tagged arrangement");
}

namespace detail {

inline std::vector<BoundState> dedupe_sorted(std::vector<RealRoot> roots, double tol) {
  std::sort(roots.begin(), roots.end(),
            [](const RealRoot &a, const RealRoot &b) { return a.x < b.x; });
  std::vector<BoundState> out;
  for (const auto &r : roots) {
    if (!out.empty() && r.x - out.back().energy <= tol) {
      if (r.residual < out.back().residual)
        out.back() = {r.x, r.residual, 0};
      continue;
    }
    out.push_back({r.x, r.residual, 0});
  }
  return out;
}

inline std::vector<BoundState> closed_form_roots(const Arrangement &arr,
                                                 const ScanSpec &scan) {
  const double m = arr.mass();
  const double lo = -m + scan.endpoint_eps * m, hi = m - scan.endpoint_eps * m;
  std::vector<RealRoot> all;
  const int branches = arr.parity() == Parity::even ? 2 : 1;
  for (int b = 0; b < branches; ++b) {
    auto f = [&](double E) { return closed_form_bound_residuals(arr, E)[b]; };
    auto roots = scan_roots(f, lo, hi, scan.grid, scan.energy_tol * m, scan.threads);
    all.insert(all.end(), roots.begin(), roots.end());
  }
  return dedupe_sorted(std::move(all), 1e3 * scan.energy_tol * m);
}

inline void tag_branches(const Arrangement &arr, std::vector<BoundState> &states,
                         double tol) {
  if (arr.parity() != Parity::even)
    return;
  for (auto &s : states) {
    const auto r = closed_form_bound_residuals(arr, s.energy);
    const bool plus = std::abs(r[0]) <= tol, minus = std::abs(r[1]) <= tol;
    s.branch = plus == minus ? 0 : (plus ? +1 : -1);
  }
}

} // namespace detail

/// Bound states from the sign-scanned phase-removed M_22 on (-m, m).
inline SpectrumReport find_bound_states(const Arrangement &arr,
                                        const ScanSpec &scan = {}) {
  if (scan.grid < 2)
    throw Error(ErrorCode::InvalidInput, "scan grid must have at least two points");
  const double m = arr.mass();
  const double lo = -m + scan.endpoint_eps * m, hi = m - scan.endpoint_eps * m;
  const Tolerances &tol = scan.tol;

  auto f = [&](double E) { return bound_function(arr, E, tol); };
  auto roots = scan_roots(f, lo, hi, scan.grid, scan.energy_tol * m, scan.threads);

  SpectrumReport report;
  report.bound_states = detail::dedupe_sorted(std::move(roots), 1e3 * scan.energy_tol * m);
  report.critical = check_critical(arr, tol);
  report.supercritical = check_supercritical(arr, tol);

  if (arr.parity() != Parity::general) {
    detail::tag_branches(arr, report.bound_states, tol.closed_form);
    if (scan.cross_validate) {
      for (const auto &s : report.bound_states) {
        const auto r = closed_form_bound_residuals(arr, s.energy);
        if (std::min(std::abs(r[0]), std::abs(r[1])) > tol.closed_form)
          throw Error(ErrorCode::InternalError,
                      "bound state does not satisfy the closed-form condition");
      }
      const auto closed = detail::closed_form_roots(arr, scan);
      if (closed.size() > report.bound_states.size())
        throw Error(ErrorCode::GridTooCoarse,
                    "closed form resolves more bound states than the scan grid");
    }
  }
  return report;
}

/// Fast path for parity-tagged arrangements: roots of the closed forms only.
inline SpectrumReport find_bound_states_closed_form(const Arrangement &arr,
                                                    const ScanSpec &scan = {}) {
  if (arr.parity() == Parity::general)
    throw Error(ErrorCode::InvalidInput, "closed forms need a parity-tagged arrangement");
  SpectrumReport report;
  report.bound_states = detail::closed_form_roots(arr, scan);
  detail::tag_branches(arr, report.bound_states, scan.tol.closed_form);
  report.critical = check_critical(arr, scan.tol);
  report.supercritical = check_supercritical(arr, scan.tol);
  report.method = arr.parity() == Parity::even ? SpectrumMethod::even_closed_form
                                               : SpectrumMethod::odd_closed_form;
  return report;
}

inline std::size_t count_bound_states(const Arrangement &arr) {
  return find_bound_states(arr).bound_states.size();
}

} // namespace pointscatter
