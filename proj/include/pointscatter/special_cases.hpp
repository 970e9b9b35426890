#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pointscatter/lambda_algebra.hpp"
#include "pointscatter/transfer_core.hpp"

namespace pointscatter {

enum class CaseKind {
  equal_mixture,
  inverted_mixture,
  pseudoscalar,
  magnetostatic,
  scalar,
  electrostatic,
};

struct SpecialCaseId {
  Parity parity = Parity::even;
  CaseKind kind = CaseKind::equal_mixture;
  double strength = 0.0;
};

constexpr std::string_view to_string(CaseKind k) {
  switch (k) {
  case CaseKind::equal_mixture: return "equal-mixture";
  case CaseKind::inverted_mixture: return "inverted-mixture";
  case CaseKind::pseudoscalar: return "pseudoscalar";
  case CaseKind::magnetostatic: return "magnetostatic";
  case CaseKind::scalar: return "scalar";
  case CaseKind::electrostatic: return "electrostatic";
  }
  return "?";
}

inline constexpr std::array<CaseKind, 6> all_case_kinds{
    CaseKind::equal_mixture, CaseKind::inverted_mixture, CaseKind::pseudoscalar,
    CaseKind::magnetostatic, CaseKind::scalar,           CaseKind::electrostatic};

inline std::string case_name(Parity parity, CaseKind kind) {
  return std::string(to_string(parity)) + "/" + std::string(to_string(kind));
}

/// Parses "even/equal-mixture", "odd/pseudoscalar", ...
inline std::pair<Parity, CaseKind> parse_case(std::string_view name) {
  const auto slash = name.find('/');
  if (slash == std::string_view::npos)
    throw Error(ErrorCode::UnknownCase, std::string(name));
  const auto par = name.substr(0, slash), kind = name.substr(slash + 1);
  Parity p;
  if (par == "even")
    p = Parity::even;
  else if (par == "odd")
    p = Parity::odd;
  else
    throw Error(ErrorCode::UnknownCase, std::string(name));
  for (CaseKind k : all_case_kinds)
    if (to_string(k) == kind)
      return {p, k};
  throw Error(ErrorCode::UnknownCase, std::string(name));
}

/// Name of the free strength for a case kind.
constexpr std::string_view strength_symbol(CaseKind k) {
  switch (k) {
  case CaseKind::equal_mixture:
  case CaseKind::inverted_mixture:
  case CaseKind::electrostatic: return "A0";
  case CaseKind::pseudoscalar: return "W";
  case CaseKind::magnetostatic: return "A1";
  case CaseKind::scalar: return "B";
  }
  return "?";
}

/// Matching data at -l/2 for one case. Mixtures are written directly:
/// equal (A0 = B = g) has c = 2g, inverted (A0 = -B = g) has b = 2g.
inline LambdaParams case_lambda(CaseKind kind, double g) {
  if (!std::isfinite(g))
    throw Error(ErrorCode::InvalidInput,
                "case strengths must be finite; use the impermeable box for limits");
  switch (kind) {
  case CaseKind::equal_mixture: return LambdaParams::make(0.0, 1.0, 0.0, 2.0 * g, 1.0);
  case CaseKind::inverted_mixture: return LambdaParams::make(0.0, 1.0, 2.0 * g, 0.0, 1.0);
  case CaseKind::pseudoscalar: return strengths_to_lambda(PhysicalStrengths::pseudoscalar(g));
  case CaseKind::magnetostatic: return strengths_to_lambda(PhysicalStrengths::magnetostatic(g));
  case CaseKind::scalar: return strengths_to_lambda(PhysicalStrengths::scalar(g));
  case CaseKind::electrostatic: return strengths_to_lambda(PhysicalStrengths::electrostatic(g));
  }
  throw Error(ErrorCode::UnknownCase, "case kind");
}

inline Arrangement instantiate(const SpecialCaseId &id, double m, double l) {
  const LambdaParams base = case_lambda(id.kind, id.strength);
  if (id.parity == Parity::even)
    return make_even_arrangement(base, m, l);
  if (id.parity == Parity::odd)
    return make_odd_arrangement(base, m, l);
  throw Error(ErrorCode::UnknownCase, "special cases are even or odd");
}

// ---------------------------------------------------------------------------
// Closed-form residual table

using BoundResidualFn = std::array<double, 2> (*)(const LambdaParams &, double g,
                                                  double E, double m, double l);
using ResonanceResidualFn = std::array<cplx, 2> (*)(const LambdaParams &, double g,
                                                    cplx E, cplx k, double m, double l);
/// Strength-independent side of the resonance equation: its imaginary part
/// vanishes on every pole.
using LocusFn = std::array<cplx, 2> (*)(cplx E, cplx k, double m, double l);

struct CaseRow {
  Parity parity;
  CaseKind kind;
  int bound_branches; // 0: no bound-state equation
  BoundResidualFn bound;
  int resonance_branches; // 0: no resonances
  ResonanceResidualFn resonance;
  LocusFn locus;
};

namespace cases {

inline const cplx I(0.0, 1.0);

// Even arrangements -------------------------------------------------------

inline std::array<double, 2> bound_even_equal(const LambdaParams &, double g,
                                              double E, double m, double l) {
  const double q = std::sqrt((m - E) / (m + E));
  const double e = std::exp(-gap_kappa(E, m) * l);
  return {q + g * (1.0 + e), q + g * (1.0 - e)};
}
inline std::array<cplx, 2> res_even_equal(const LambdaParams &, double g, cplx E,
                                          cplx k, double m, double l) {
  const cplx e = std::exp(I * k * l);
  return {I * k - g * (m + E) * (1.0 + e), I * k - g * (m + E) * (1.0 - e)};
}
inline std::array<cplx, 2> locus_even_equal(cplx E, cplx k, double m, double l) {
  const cplx e = std::exp(I * k * l);
  return {I * k / ((m + E) * (1.0 + e)), I * k / ((m + E) * (1.0 - e))};
}

inline std::array<double, 2> bound_even_inverted(const LambdaParams &, double g,
                                                 double E, double m, double l) {
  const double q = std::sqrt((m + E) / (m - E));
  const double e = std::exp(-gap_kappa(E, m) * l);
  return {q + g * (1.0 - e), q + g * (1.0 + e)};
}
inline std::array<cplx, 2> res_even_inverted(const LambdaParams &, double g, cplx E,
                                             cplx k, double m, double l) {
  const cplx e = std::exp(I * k * l);
  return {I * (m + E) + g * k * (1.0 - e), I * (m + E) + g * k * (1.0 + e)};
}
inline std::array<cplx, 2> locus_even_inverted(cplx E, cplx k, double m, double l) {
  const cplx e = std::exp(I * k * l);
  return {-I * (m + E) / (k * (1.0 - e)), -I * (m + E) / (k * (1.0 + e))};
}

inline double pseudo_q(double W) { return 4.0 * W / (4.0 + W * W); }

inline std::array<double, 2> bound_even_pseudo(const LambdaParams &, double W,
                                               double E, double m, double l) {
  const double r = std::exp(gap_kappa(E, m) * l) - std::abs(pseudo_q(W));
  return {r, r};
}
inline std::array<cplx, 2> res_even_pseudo(const LambdaParams &, double W, cplx,
                                           cplx k, double, double l) {
  const double q = pseudo_q(W);
  const cplx r = std::exp(-2.0 * I * k * l) - q * q;
  return {r, r};
}
inline std::array<cplx, 2> locus_pseudo(cplx, cplx k, double, double l) {
  const cplx r = std::exp(-2.0 * I * k * l);
  return {r, r};
}

inline std::array<double, 2> bound_even_scalar(const LambdaParams &p, double,
                                               double E, double m, double l) {
  const double kappa = gap_kappa(E, m);
  const double e = std::abs(E) * std::exp(-kappa * l);
  return {p.a() * kappa + p.b() * (m + e), p.a() * kappa + p.b() * (m - e)};
}
inline std::array<cplx, 2> res_even_scalar(const LambdaParams &p, double, cplx E,
                                           cplx k, double m, double l) {
  const cplx e = E * std::exp(I * k * l);
  return {-I * k * p.a() - p.b() * (-m + e), -I * k * p.a() - p.b() * (-m - e)};
}
inline std::array<cplx, 2> locus_even_scalar(cplx E, cplx k, double m, double l) {
  const cplx e = E * std::exp(I * k * l);
  return {(-m + e) / (-I * k), (-m - e) / (-I * k)};
}

inline std::array<double, 2> bound_even_electro(const LambdaParams &p, double,
                                                double E, double m, double l) {
  const double kappa = gap_kappa(E, m);
  const double e = m * std::exp(-kappa * l);
  return {p.a() * kappa - p.b() * (E + e), p.a() * kappa - p.b() * (E - e)};
}
inline std::array<cplx, 2> res_even_electro(const LambdaParams &p, double, cplx E,
                                            cplx k, double m, double l) {
  const cplx e = m * std::exp(I * k * l);
  return {-I * k * p.a() - p.b() * (E + e), -I * k * p.a() - p.b() * (E - e)};
}
inline std::array<cplx, 2> locus_even_electro(cplx E, cplx k, double m, double l) {
  const cplx e = m * std::exp(I * k * l);
  return {(E + e) / (-I * k), (E - e) / (-I * k)};
}

// Odd arrangements --------------------------------------------------------

inline std::array<double, 2> bound_odd_equal(const LambdaParams &, double g,
                                             double E, double m, double l) {
  const double e = std::exp(-2.0 * gap_kappa(E, m) * l);
  const double r = g * g * (m + E) * (1.0 - e) - (m - E);
  return {r, r};
}
inline std::array<cplx, 2> res_odd_equal(const LambdaParams &, double g, cplx E,
                                         cplx k, double m, double l) {
  const cplx e = std::exp(2.0 * I * k * l);
  const cplx r = g * g * (m + E) * (1.0 - e) - (m - E);
  return {r, r};
}
inline std::array<cplx, 2> locus_odd_equal(cplx E, cplx k, double m, double l) {
  const cplx r = (m + E) / (m - E) * (1.0 - std::exp(2.0 * I * k * l));
  return {r, r};
}

inline std::array<double, 2> bound_odd_inverted(const LambdaParams &, double g,
                                                double E, double m, double l) {
  const double e = std::exp(-2.0 * gap_kappa(E, m) * l);
  const double r = g * g * (m - E) * (1.0 - e) - (m + E);
  return {r, r};
}
inline std::array<cplx, 2> res_odd_inverted(const LambdaParams &, double g, cplx E,
                                            cplx k, double m, double l) {
  const cplx e = std::exp(2.0 * I * k * l);
  const cplx r = g * g * (m - E) * (1.0 - e) - (m + E);
  return {r, r};
}
inline std::array<cplx, 2> locus_odd_inverted(cplx E, cplx k, double m, double l) {
  const cplx r = (m - E) / (m + E) * (1.0 - std::exp(2.0 * I * k * l));
  return {r, r};
}

inline std::array<double, 2> bound_odd_pseudo(const LambdaParams &p, double,
                                              double E, double m, double l) {
  const double e = std::exp(-2.0 * gap_kappa(E, m) * l);
  const double r = (p.a() - p.d()) * (p.a() - p.d()) * e + (p.a() + p.d()) * (p.a() + p.d());
  return {r, r};
}
inline std::array<cplx, 2> res_odd_pseudo(const LambdaParams &, double W, cplx,
                                          cplx k, double, double l) {
  const double q = pseudo_q(W);
  const cplx r = std::exp(-2.0 * I * k * l) + q * q;
  return {r, r};
}

inline std::array<double, 2> bound_odd_scalar(const LambdaParams &p, double,
                                              double E, double m, double l) {
  const double kappa = gap_kappa(E, m);
  const double e = std::exp(-2.0 * kappa * l);
  const double r = p.b() * p.b() * (m * m - E * E * e) - p.a() * p.a() * kappa * kappa;
  return {r, r};
}
inline std::array<cplx, 2> res_odd_scalar(const LambdaParams &p, double, cplx E,
                                          cplx k, double m, double l) {
  const cplx e = std::exp(2.0 * I * k * l);
  const cplx r = p.b() * p.b() * (m * m - E * E * e) + p.a() * p.a() * k * k;
  return {r, r};
}
inline std::array<cplx, 2> locus_odd_scalar(cplx E, cplx k, double m, double l) {
  const cplx r = (m * m - E * E * std::exp(2.0 * I * k * l)) / (-k * k);
  return {r, r};
}

inline std::array<double, 2> bound_odd_electro(const LambdaParams &p, double,
                                               double E, double m, double l) {
  const double kappa = gap_kappa(E, m);
  const double e = std::exp(-2.0 * kappa * l);
  const double r = p.b() * p.b() * (E * E - m * m * e) - p.a() * p.a() * kappa * kappa;
  return {r, r};
}
inline std::array<cplx, 2> res_odd_electro(const LambdaParams &p, double, cplx E,
                                           cplx k, double m, double l) {
  const cplx e = std::exp(2.0 * I * k * l);
  const cplx r = p.b() * p.b() * (E * E - m * m * e) + p.a() * p.a() * k * k;
  return {r, r};
}
inline std::array<cplx, 2> locus_odd_electro(cplx E, cplx k, double m, double l) {
  const cplx r = (E * E - m * m * std::exp(2.0 * I * k * l)) / (-k * k);
  return {r, r};
}

} // namespace cases

inline const std::array<CaseRow, 12> &case_table() {
  using namespace cases;
  static const std::array<CaseRow, 12> rows{{
      {Parity::even, CaseKind::equal_mixture, 2, bound_even_equal, 2, res_even_equal, locus_even_equal},
      {Parity::even, CaseKind::inverted_mixture, 2, bound_even_inverted, 2, res_even_inverted, locus_even_inverted},
      {Parity::even, CaseKind::pseudoscalar, 1, bound_even_pseudo, 1, res_even_pseudo, locus_pseudo},
      {Parity::even, CaseKind::magnetostatic, 0, nullptr, 0, nullptr, nullptr},
      {Parity::even, CaseKind::scalar, 2, bound_even_scalar, 2, res_even_scalar, locus_even_scalar},
      {Parity::even, CaseKind::electrostatic, 2, bound_even_electro, 2, res_even_electro, locus_even_electro},
      {Parity::odd, CaseKind::equal_mixture, 1, bound_odd_equal, 1, res_odd_equal, locus_odd_equal},
      {Parity::odd, CaseKind::inverted_mixture, 1, bound_odd_inverted, 1, res_odd_inverted, locus_odd_inverted},
      {Parity::odd, CaseKind::pseudoscalar, 1, bound_odd_pseudo, 1, res_odd_pseudo, locus_pseudo},
      {Parity::odd, CaseKind::magnetostatic, 0, nullptr, 0, nullptr, nullptr},
      {Parity::odd, CaseKind::scalar, 1, bound_odd_scalar, 1, res_odd_scalar, locus_odd_scalar},
      {Parity::odd, CaseKind::electrostatic, 1, bound_odd_electro, 1, res_odd_electro, locus_odd_electro},
  }};
  return rows;
}

inline const CaseRow &case_row(Parity parity, CaseKind kind) {
  for (const auto &row : case_table())
    if (row.parity == parity && row.kind == kind)
      return row;
  throw Error(ErrorCode::UnknownCase, "no registry row for this parity/kind");
}

struct BoundResidual {
  std::array<double, 2> value{};
  int branches = 0;
};

/// Closed-form bound-state residual(s) at a gap energy. Where the equation
/// carries a sign choice both branches are returned.
inline BoundResidual bound_residual(const SpecialCaseId &id, double E, double m,
                                    double l) {
  const CaseRow &row = case_row(id.parity, id.kind);
  if (row.bound_branches == 0)
    throw Error(ErrorCode::CaseHasNoBoundEquation, case_name(id.parity, id.kind));
  if (!(std::abs(E) < m))
    throw Error(ErrorCode::InvalidInput, "bound residual needs |E| < m");
  const LambdaParams p = case_lambda(id.kind, id.strength);
  return {row.bound(p, id.strength, E, m, l), row.bound_branches};
}

struct ResonanceResidual {
  std::array<cplx, 2> value{};
  int branches = 0;
};

inline ResonanceResidual resonance_residual(const SpecialCaseId &id, cplx E,
                                            double m, double l) {
  const CaseRow &row = case_row(id.parity, id.kind);
  if (row.resonance_branches == 0)
    throw Error(ErrorCode::CaseHasNoResonances, case_name(id.parity, id.kind));
  const LambdaParams p = case_lambda(id.kind, id.strength);
  return {row.resonance(p, id.strength, E, momentum(E, m), m, l),
          row.resonance_branches};
}

// ---------------------------------------------------------------------------
// Tables of expectations

struct StrengthSymmetry {
  std::string name;
  std::function<double(double)> map;
  bool flips_energy = false; // spectrum maps E -> -E instead of E -> E
};

struct CaseExpectation {
  std::vector<double> critical_values;
  std::vector<double> supercritical_values;
  bool critical_everywhere = false;
  bool supercritical_everywhere = false;
  bool free_like = false;
  bool has_resonances = true;
  bool resonances_become_real = false; // at the impermeable limit
  /// Number of bound states; empty inside the guard band around a value
  /// where the count changes.
  std::function<std::optional<int>(double)> bound_count;
  std::vector<StrengthSymmetry> symmetries;
};

namespace detail {

inline bool in_guard_band(double g, std::span<const double> marks, double rel) {
  for (double t : marks)
    if (std::abs(g - t) <= rel * std::max(1.0, std::abs(t)))
      return true;
  return false;
}

} // namespace detail

inline CaseExpectation expectations(Parity parity, CaseKind kind, double m, double l,
                                    double guard = 1e-6) {
  CaseExpectation ex;
  const double ml = m * l;
  const auto identity = [](double g) { return g; };
  const auto negate = [](double g) { return -g; };
  const auto invert4 = [](double g) { return 4.0 / g; };
  const auto neg_invert4 = [](double g) { return -4.0 / g; };

  switch (kind) {
  case CaseKind::equal_mixture:
  case CaseKind::inverted_mixture: {
    const bool equal = kind == CaseKind::equal_mixture;
    ex.resonances_become_real = true;
    std::vector<double> marks;
    if (parity == Parity::even) {
      marks = {0.0, -1.0 / (2.0 * ml)};
      (equal ? ex.critical_values : ex.supercritical_values) = marks;
      (equal ? ex.supercritical_everywhere : ex.critical_everywhere) = true;
      ex.bound_count = [marks, guard](double g) -> std::optional<int> {
        if (detail::in_guard_band(g, marks, guard))
          return std::nullopt;
        return g >= 0.0 ? 0 : (g > marks[1] ? 1 : 2);
      };
    } else {
      marks = {0.0};
      (equal ? ex.critical_values : ex.supercritical_values) = marks;
      (equal ? ex.supercritical_everywhere : ex.critical_everywhere) = true;
      ex.bound_count = [marks, guard](double g) -> std::optional<int> {
        if (detail::in_guard_band(g, marks, guard))
          return std::nullopt;
        return 1;
      };
      ex.symmetries.push_back({"A0->-A0", negate, false});
    }
    break;
  }
  case CaseKind::pseudoscalar:
    ex.critical_everywhere = ex.supercritical_everywhere = true;
    ex.resonances_become_real = true;
    ex.bound_count = [](double) -> std::optional<int> { return 0; };
    ex.symmetries.push_back({"W->-W", negate, false});
    ex.symmetries.push_back({"W->4/W", invert4, false});
    break;
  case CaseKind::magnetostatic:
    ex.free_like = true;
    ex.has_resonances = false;
    ex.bound_count = [](double) -> std::optional<int> { return 0; };
    break;
  case CaseKind::scalar: {
    ex.resonances_become_real = true;
    if (parity == Parity::even) {
      std::vector<double> marks{0.0};
      double b_plus = NAN, b_minus = NAN;
      if (ml >= 1.0) {
        const double root = std::sqrt(ml * ml - 1.0);
        b_plus = -2.0 * (ml + root);
        b_minus = -2.0 * (ml - root);
        marks.push_back(b_plus);
        marks.push_back(b_minus);
      }
      ex.critical_values = marks;
      ex.supercritical_values = marks;
      std::vector<double> guard_marks = marks;
      guard_marks.push_back(2.0);
      guard_marks.push_back(-2.0);
      ex.bound_count = [guard_marks, b_plus, b_minus, guard](double B) -> std::optional<int> {
        if (detail::in_guard_band(B, guard_marks, guard))
          return std::nullopt;
        if (B > 0.0)
          return 0;
        const bool extra = !std::isnan(b_plus) && B > b_plus && B < b_minus;
        return extra ? 4 : 2;
      };
      ex.symmetries.push_back({"B->4/B", invert4, false});
    } else {
      ex.critical_values = {0.0};
      ex.supercritical_values = {0.0};
      ex.bound_count = [guard](double B) -> std::optional<int> {
        const double marks[] = {0.0, 2.0, -2.0};
        if (detail::in_guard_band(B, marks, guard))
          return std::nullopt;
        return 2;
      };
      ex.symmetries.push_back({"B->-B", negate, false});
      ex.symmetries.push_back({"B->4/B", invert4, false});
      ex.symmetries.push_back({"E->-E", identity, true});
    }
    break;
  }
  case CaseKind::electrostatic: {
    if (parity == Parity::even) {
      const double root = std::sqrt(ml * ml + 1.0);
      const double crit_p = 2.0 * (ml + root), crit_m = 2.0 * (ml - root);
      const double super_p = 2.0 * (-ml + root), super_m = 2.0 * (-ml - root);
      ex.critical_values = {0.0, crit_m, crit_p};
      ex.supercritical_values = {0.0, super_m, super_p};
      const std::vector<double> marks{0.0, crit_m, crit_p, super_m, super_p};
      ex.bound_count = [=](double A0) -> std::optional<int> {
        if (detail::in_guard_band(A0, marks, guard))
          return std::nullopt;
        int n = 1;
        if (A0 > super_m && A0 < crit_m)
          ++n;
        if (A0 > super_p && A0 < crit_p)
          ++n;
        return n;
      };
      ex.symmetries.push_back({"A0->-4/A0", neg_invert4, false});
    } else {
      ex.critical_values = {0.0};
      ex.supercritical_values = {0.0};
      ex.bound_count = [guard](double A0) -> std::optional<int> {
        const double marks[] = {0.0};
        if (detail::in_guard_band(A0, marks, guard))
          return std::nullopt;
        return 2;
      };
      ex.symmetries.push_back({"A0->-A0", negate, false});
      ex.symmetries.push_back({"A0->-4/A0", neg_invert4, false});
      ex.symmetries.push_back({"E->-E", identity, true});
    }
    break;
  }
  }
  return ex;
}

} // namespace pointscatter
