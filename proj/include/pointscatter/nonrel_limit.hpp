#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pointscatter/roots.hpp"
#include "pointscatter/special_cases.hpp"
#include "pointscatter/spectra.hpp"

namespace pointscatter {

enum class NonRelKind { delta, nonlocal_delta_prime, local_delta_prime, singular_gauge };

constexpr const char *to_string(NonRelKind k) {
  switch (k) {
  case NonRelKind::delta: return "delta";
  case NonRelKind::nonlocal_delta_prime: return "nonlocal-delta-prime";
  case NonRelKind::local_delta_prime: return "local-delta-prime";
  case NonRelKind::singular_gauge: return "singular-gauge";
  }
  return "?";
}

/// Schrodinger matching data acting on (u, u'): (u, u')(x+) = L (u, u')(x-).
struct NonRelLambda {
  NonRelKind kind = NonRelKind::delta;
  CMat2 matrix;
  double strength = 0.0;
  double mass = 1.0;
};

inline NonRelLambda nonrel_matching(NonRelKind kind, double strength, double m) {
  if (!(m > 0.0) || !std::isfinite(strength))
    throw Error(ErrorCode::InvalidInput, "non-relativistic matching needs m > 0 and finite strength");
  NonRelLambda out{kind, CMat2::identity(), strength, m};
  switch (kind) {
  case NonRelKind::delta:
    out.matrix = CMat2(1.0, 0.0, 4.0 * m * strength, 1.0);
    break;
  case NonRelKind::nonlocal_delta_prime:
    out.matrix = CMat2(1.0, 2.0 * strength / (2.0 * m), 0.0, 1.0);
    break;
  case NonRelKind::local_delta_prime: {
    // W = +-2 makes one diagonal entry vanish and the other diverge.
    if (std::abs(strength) == 2.0)
      throw Error(ErrorCode::InvalidStrength, "local delta-prime needs W != +-2");
    const double a = (2.0 - strength) / (2.0 + strength);
    out.matrix = CMat2(a, 0.0, 0.0, 1.0 / a);
    break;
  }
  case NonRelKind::singular_gauge: {
    const double A1 = strength;
    const double phase = std::arg(cplx(A1 * A1 - 4.0, 4.0 * A1));
    out.matrix = std::polar(1.0, phase) * CMat2(-1.0, 0.0, 0.0, -1.0);
    break;
  }
  }
  return out;
}

struct NonRelScan {
  std::size_t grid = 4096;
  double kappa_tol = 1e-13; // relative to the scan range
  unsigned threads = 0;
};

/// Bound energies eps < 0 of -u''/(2m) = eps u with the two matching
/// conditions at -l/2 (first) and +l/2 (second). Solved on kappa = sqrt(-2 m
/// eps) by bisection of [L2 T(l) L1 (1, kappa)] . (kappa, 1) = 0, with the
/// constant phase of L1 L2 divided out.
inline std::vector<double> schrodinger_two_point_bound(const CMat2 &l1, const CMat2 &l2,
                                                       double m, double l,
                                                       double kappa_max,
                                                       const NonRelScan &scan = {}) {
  const cplx phase = std::sqrt(l1.det() * l2.det());
  const auto f = [&](double kappa) {
    const double ch = std::cosh(kappa * l), sh = std::sinh(kappa * l);
    const double sk = kappa * l < 1e-8 ? l : sh / kappa;
    const CMat2 T(ch, sk, kappa * sh, ch);
    const CMat2 M = l2 * T * l1;
    const cplx v0 = M.m11() + M.m12() * kappa;
    const cplx v1 = M.m21() + M.m22() * kappa;
    return ((kappa * v0 + v1) / phase).real() * std::exp(-kappa * l);
  };
  const double lo = 1e-9 * kappa_max;
  std::vector<double> eps;
  for (const auto &r : scan_roots(f, lo, kappa_max, scan.grid,
                                  scan.kappa_tol * kappa_max, scan.threads))
    eps.push_back(-r.x * r.x / (2.0 * m));
  std::sort(eps.begin(), eps.end());
  return eps;
}

/// Two delta wells with coupling g1 at -l/2 and g2 at +l/2, matched through
/// the delta matrices (u' jumps by 4 m g u; g < 0 binds).
inline std::vector<double> schrodinger_double_delta_bound(double g1, double g2, double m,
                                                          double l,
                                                          const NonRelScan &scan = {}) {
  if (!(m > 0.0) || !(l >= 0.0))
    throw Error(ErrorCode::InvalidInput, "double delta needs m > 0 and l >= 0");
  if (g1 == 0.0 && g2 == 0.0)
    return {};
  const auto l1 = nonrel_matching(NonRelKind::delta, g1, m).matrix;
  const auto l2 = nonrel_matching(NonRelKind::delta, g2, m).matrix;
  // A single well binds at kappa = 2 m |g|; two wells at most at the sum.
  const double kappa_max = 2.0 * m * (std::abs(g1) + std::abs(g2)) * 1.5 + 1e-6 * m;
  return schrodinger_two_point_bound(l1, l2, m, l, kappa_max, scan);
}

enum class NonRelStatus { ok, no_bound_state_in_either_model, count_mismatch };

constexpr const char *to_string(NonRelStatus s) {
  switch (s) {
  case NonRelStatus::ok: return "ok";
  case NonRelStatus::no_bound_state_in_either_model: return "NoBoundStateInEitherModel";
  case NonRelStatus::count_mismatch: return "CountMismatch";
  }
  return "?";
}

struct NonRelReport {
  NonRelKind kind = NonRelKind::delta;
  std::vector<double> eps_rel; // E - m for relativistic bound states, ascending
  std::vector<double> eps_nr;  // Schrodinger energies, ascending
  std::optional<double> ground_rel, ground_nr;
  std::optional<double> deviation; // |ground_rel - ground_nr| / |ground_nr|
  NonRelStatus status = NonRelStatus::ok;
};

inline NonRelKind nonrel_kind_for(CaseKind kind) {
  switch (kind) {
  case CaseKind::equal_mixture: return NonRelKind::delta;
  case CaseKind::inverted_mixture: return NonRelKind::nonlocal_delta_prime;
  case CaseKind::pseudoscalar: return NonRelKind::local_delta_prime;
  case CaseKind::magnetostatic: return NonRelKind::singular_gauge;
  default:
    throw Error(ErrorCode::UnknownCase,
                "no non-relativistic counterpart registered for this case");
  }
}

/// Compares the relativistic binding energies (E - m, from the general
/// spectrum) with the Schrodinger problem built from the matching matrices.
/// Relativistic states in the lower half of the gap are antiparticle-like
/// and are not part of the comparison.
inline NonRelReport nonrel_consistency_check(const SpecialCaseId &id, double m, double l,
                                             const ScanSpec &scan = {}) {
  NonRelReport rep;
  rep.kind = nonrel_kind_for(id.kind);
  const double g = id.strength;
  // Strength at +l/2 follows the arrangement's parity.
  const double sign2 = (id.parity == Parity::odd &&
                        (id.kind == CaseKind::equal_mixture ||
                         id.kind == CaseKind::inverted_mixture))
                           ? -1.0
                           : 1.0;
  double g2 = sign2 * g;
  if (id.parity == Parity::even &&
      (id.kind == CaseKind::pseudoscalar || id.kind == CaseKind::magnetostatic))
    g2 = -g;

  // Deep in this regime the even doublet splits by ~e^{-kappa l}, far below
  // any practical energy grid, so the per-branch closed forms are used.
  const auto arr = instantiate(id, m, l);
  for (const auto &s : find_bound_states_closed_form(arr, scan).bound_states)
    if (s.energy > 0.0)
      rep.eps_rel.push_back(s.energy - m);

  if (g != 0.0) {
    const auto l1 = nonrel_matching(rep.kind, g, m).matrix;
    const auto l2 = nonrel_matching(rep.kind, g2, m).matrix;
    double kappa_max = 6.0 * m * std::abs(g) + 1e-6 * m;
    if (rep.kind == NonRelKind::nonlocal_delta_prime)
      kappa_max = std::max(kappa_max, 8.0 * m / std::abs(g));
    if (rep.kind == NonRelKind::local_delta_prime || rep.kind == NonRelKind::singular_gauge)
      kappa_max = 10.0 * m;
    rep.eps_nr = schrodinger_two_point_bound(l1, l2, m, l, kappa_max);
  }

  if (rep.eps_rel.empty() && rep.eps_nr.empty()) {
    rep.status = NonRelStatus::no_bound_state_in_either_model;
    return rep;
  }
  if (!rep.eps_rel.empty())
    rep.ground_rel = rep.eps_rel.front();
  if (!rep.eps_nr.empty())
    rep.ground_nr = rep.eps_nr.front();
  if (rep.eps_rel.size() != rep.eps_nr.size())
    rep.status = NonRelStatus::count_mismatch;
  if (rep.ground_rel && rep.ground_nr)
    rep.deviation = std::abs(*rep.ground_rel - *rep.ground_nr) / std::abs(*rep.ground_nr);
  return rep;
}

} // namespace pointscatter
