#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "pointscatter/errors.hpp"
#include "pointscatter/matrix2.hpp"
#include "pointscatter/tolerances.hpp"

namespace pointscatter {

enum class StrengthField : std::uint8_t { B = 0, A0 = 1, A1 = 2, W = 3 };

/// Scalar (B), electrostatic (A0), magnetostatic (A1) and pseudoscalar (W)
/// couplings of one point interaction. An infinite coupling is carried as a
/// flag; its stored value is then only the sign (+1 or -1).
class PhysicalStrengths {
public:
  constexpr PhysicalStrengths() = default;

  /// Rejects NaN. IEEE infinities are accepted and turned into flags.
  static PhysicalStrengths make(double B, double A0, double A1, double W) {
    PhysicalStrengths s;
    const std::array<double, 4> in{B, A0, A1, W};
    for (std::size_t i = 0; i < 4; ++i) {
      if (std::isnan(in[i]))
        throw Error(ErrorCode::InvalidInput, "NaN physical strength");
      if (std::isinf(in[i])) {
        s.v_[i] = in[i] > 0 ? 1.0 : -1.0;
        s.infinite_ |= static_cast<std::uint8_t>(1u << i);
      } else {
        s.v_[i] = in[i];
      }
    }
    return s;
  }

  static PhysicalStrengths scalar(double B) { return make(B, 0, 0, 0); }
  static PhysicalStrengths electrostatic(double A0) { return make(0, A0, 0, 0); }
  static PhysicalStrengths magnetostatic(double A1) { return make(0, 0, A1, 0); }
  static PhysicalStrengths pseudoscalar(double W) { return make(0, 0, 0, W); }

  double B() const { return v_[0]; }
  double A0() const { return v_[1]; }
  double A1() const { return v_[2]; }
  double W() const { return v_[3]; }
  double get(StrengthField f) const { return v_[static_cast<int>(f)]; }

  bool is_infinite(StrengthField f) const {
    return (infinite_ >> static_cast<int>(f)) & 1u;
  }
  bool is_finite() const { return infinite_ == 0; }

  friend bool operator==(const PhysicalStrengths &, const PhysicalStrengths &) = default;

private:
  std::array<double, 4> v_{0.0, 0.0, 0.0, 0.0};
  std::uint8_t infinite_ = 0;
};

/// Matching data of one point: psi(x+) = Lambda psi(x-) with
/// Lambda = e^{i phi} [[a, i b], [-i c, d]], a d - b c = 1, phi in [0, pi).
class LambdaParams {
public:
  /// Identity boundary condition (no interaction).
  constexpr LambdaParams() = default;

  /// Builds permeable data. phi is folded into [0, pi); each shift by pi
  /// flips the sign of (a, b, c, d) so the matrix itself is unchanged.
  static LambdaParams make(double phi, double a, double b, double c, double d,
                           const Tolerances &tol = default_tolerances) {
    for (double x : {phi, a, b, c, d})
      if (!std::isfinite(x))
        throw Error(ErrorCode::InvalidInput,
                    "lambda parameters must be finite; use impermeable()");
    const double scale = std::max({1.0, std::abs(a * d), std::abs(b * c)});
    if (std::abs(a * d - b * c - 1.0) > tol.algebraic * scale)
      throw Error(ErrorCode::InvalidInput,
                  "lambda parameters violate a d - b c = 1");
    LambdaParams p;
    const double turns = std::floor(phi / std::numbers::pi);
    double folded = phi - turns * std::numbers::pi;
    double sign = (static_cast<long long>(turns) % 2 == 0) ? 1.0 : -1.0;
    if (folded >= std::numbers::pi) {
      folded -= std::numbers::pi;
      sign = -sign;
    }
    if (folded < 0.0)
      folded = 0.0;
    p.phi_ = folded;
    p.a_ = sign * a;
    p.b_ = sign * b;
    p.c_ = sign * c;
    p.d_ = sign * d;
    return p;
  }

  /// Impermeable data: the entries listed in infinite_mask (bit 0..3 for
  /// a..d) are infinite and only their signs are kept. No matrix exists.
  static LambdaParams impermeable(double phi, double a, double b, double c,
                                  double d, std::uint8_t infinite_mask) {
    if (infinite_mask == 0)
      throw Error(ErrorCode::InvalidInput,
                  "impermeable lambda needs at least one infinite entry");
    LambdaParams p;
    p.phi_ = phi;
    p.a_ = a;
    p.b_ = b;
    p.c_ = c;
    p.d_ = d;
    p.permeable_ = false;
    p.infinite_ = infinite_mask;
    return p;
  }

  double phi() const { return phi_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  bool permeable() const { return permeable_; }
  std::uint8_t infinite_mask() const { return infinite_; }

  CMat2 matrix() const {
    require_permeable();
    const cplx ph = std::polar(1.0, phi_);
    const cplx i(0.0, 1.0);
    return ph * CMat2(a_, i * b_, -i * c_, d_);
  }

  void require_permeable() const {
    if (!permeable_)
      throw Error(ErrorCode::ImpermeableInteraction,
                  "no matrix arithmetic on impermeable matching data");
  }

  bool is_identity(double tol = 1e-14) const {
    return permeable_ && std::abs(a_ - 1) <= tol && std::abs(d_ - 1) <= tol &&
           std::abs(b_) <= tol && std::abs(c_) <= tol && std::abs(phi_) <= tol;
  }

  friend bool operator==(const LambdaParams &, const LambdaParams &) = default;

private:
  double phi_ = 0.0;
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 1.0;
  bool permeable_ = true;
  std::uint8_t infinite_ = 0;
};

enum class Parity { even, odd, general };

constexpr const char *to_string(Parity p) {
  switch (p) {
  case Parity::even: return "even";
  case Parity::odd: return "odd";
  case Parity::general: return "general";
  }
  return "?";
}

inline bool matches_even_pattern(const LambdaParams &l1, const LambdaParams &l2,
                                 double tol = 1e-12);
inline bool matches_odd_pattern(const LambdaParams &l1, const LambdaParams &l2,
                                double tol = 1e-12);

/// Two point interactions at x1 = -l/2 (lambda1) and x2 = +l/2 (lambda2).
class Arrangement {
public:
  static Arrangement make(const LambdaParams &lambda1,
                          const LambdaParams &lambda2, double mass,
                          double separation, Parity parity = Parity::general) {
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw Error(ErrorCode::InvalidInput, "mass must be positive");
    if (!(separation >= 0.0) || !std::isfinite(separation))
      throw Error(ErrorCode::InvalidInput, "separation must be >= 0");
    lambda1.require_permeable();
    lambda2.require_permeable();
    if (parity == Parity::even && !matches_even_pattern(lambda1, lambda2))
      throw Error(ErrorCode::InvalidInput, "lambda pair is not an even pattern");
    if (parity == Parity::odd && !matches_odd_pattern(lambda1, lambda2))
      throw Error(ErrorCode::InvalidInput, "lambda pair is not an odd pattern");
    Arrangement arr;
    arr.mass_ = mass;
    arr.separation_ = separation;
    arr.lambda1_ = lambda1;
    arr.lambda2_ = lambda2;
    arr.parity_ = parity;
    return arr;
  }

  /// Both points carry the identity: a free particle.
  static Arrangement free(double mass, double separation) {
    return make(LambdaParams{}, LambdaParams{}, mass, separation, Parity::even);
  }

  double mass() const { return mass_; }
  double separation() const { return separation_; }
  double x1() const { return -0.5 * separation_; }
  double x2() const { return 0.5 * separation_; }
  const LambdaParams &lambda1() const { return lambda1_; }
  const LambdaParams &lambda2() const { return lambda2_; }
  Parity parity() const { return parity_; }

  /// Sum of the stored phases; M_22 e^{-i phase_sum} is real at k = i kappa.
  double phase_sum() const { return lambda1_.phi() + lambda2_.phi(); }

  Arrangement with_separation(double separation) const {
    return make(lambda1_, lambda2_, mass_, separation, parity_);
  }

private:
  Arrangement() = default;
  double mass_ = 1.0;
  double separation_ = 0.0;
  LambdaParams lambda1_{};
  LambdaParams lambda2_{};
  Parity parity_ = Parity::general;
};

// ---------------------------------------------------------------------------
// Strengths <-> lambda maps

/// Finite-parameter permeability test: A1 != 0 or B^2 + W^2 - A0^2 - 4 != 0.
/// For infinite strengths the predicate is not equivalent to permeability;
/// such inputs are reported as impermeable.
inline bool is_permeable(const PhysicalStrengths &s) {
  if (!s.is_finite())
    return false;
  const double cond = s.B() * s.B() + s.W() * s.W() - s.A0() * s.A0() - 4.0;
  return s.A1() != 0.0 || cond != 0.0;
}

inline LambdaParams strengths_to_lambda(const PhysicalStrengths &s,
                                        const Tolerances &tol = default_tolerances) {
  if (!s.is_finite())
    throw Error(ErrorCode::InvalidInput,
                "strength conversion needs finite strengths");
  if (!is_permeable(s))
    throw Error(ErrorCode::ImpermeableInteraction,
                "A1 = 0 and B^2 + W^2 - A0^2 - 4 = 0");
  const double B = s.B(), A0 = s.A0(), A1 = s.A1(), W = s.W();
  const double y = B * B + W * W - 4.0 - A0 * A0;
  const double x = y + A1 * A1;
  const double den = std::sqrt(x * x + 16.0 * A1 * A1);
  const double eta = A1 != 0.0 ? std::copysign(1.0, A1) : std::copysign(1.0, y);

  // tan(phi) = 4 A1 / x; the quadrant is that of the vector (x, 4 A1).
  double phi = std::atan2(4.0 * A1, x);
  if (phi < 0.0)
    phi += std::numbers::pi;
  if (phi >= std::numbers::pi)
    phi -= std::numbers::pi;

  const double a = eta * (A0 * A0 - A1 * A1 - B * B - (W - 2.0) * (W - 2.0)) / den;
  const double b = eta * 4.0 * (A0 - B) / den;
  const double c = eta * -4.0 * (A0 + B) / den;
  const double d = eta * (A0 * A0 - A1 * A1 - B * B - (W + 2.0) * (W + 2.0)) / den;
  return LambdaParams::make(phi, a, b, c, d, tol);
}

inline PhysicalStrengths lambda_to_strengths(const LambdaParams &p,
                                             const Tolerances &tol = default_tolerances) {
  p.require_permeable();
  const double den = 2.0 * std::cos(p.phi()) + p.d() + p.a();
  const double scale = std::max(2.0, std::abs(p.a()) + std::abs(p.d()));
  if (std::abs(den) <= tol.algebraic * scale)
    throw Error(ErrorCode::DegenerateDenominator,
                "2 cos(phi) + a + d = 0: strengths are infinite");
  return PhysicalStrengths::make(2.0 * (p.c() + p.b()) / den,
                                 2.0 * (p.c() - p.b()) / den,
                                 -4.0 * std::sin(p.phi()) / den,
                                 2.0 * (p.d() - p.a()) / den);
}

/// Strengths at +l/2 that make the pair parity-even: (B, A0, -A1, -W).
inline PhysicalStrengths even_partner(const PhysicalStrengths &s) {
  return PhysicalStrengths::make(s.B(), s.A0(), -s.A1(), -s.W());
}

/// Strengths at +l/2 that make the pair parity-odd: (-B, -A0, A1, W).
inline PhysicalStrengths odd_partner(const PhysicalStrengths &s) {
  return PhysicalStrengths::make(-s.B(), -s.A0(), s.A1(), s.W());
}

// ---------------------------------------------------------------------------
// Parity constructors

/// lambda2 = e^{-i phi} [[d, i b], [-i c, a]]. After folding the phase back
/// into [0, pi) the stored fields are (pi - phi, -d, -b, -c, -a) when phi > 0.
inline Arrangement make_even_arrangement(const LambdaParams &base, double mass,
                                         double separation) {
  base.require_permeable();
  const auto partner =
      LambdaParams::make(-base.phi(), base.d(), base.b(), base.c(), base.a());
  return Arrangement::make(base, partner, mass, separation, Parity::even);
}

/// lambda2 = e^{i phi} [[a, -i b], [i c, d]].
inline Arrangement make_odd_arrangement(const LambdaParams &base, double mass,
                                        double separation) {
  base.require_permeable();
  const auto partner =
      LambdaParams::make(base.phi(), base.a(), -base.b(), -base.c(), base.d());
  return Arrangement::make(base, partner, mass, separation, Parity::odd);
}

/// True when (l1, l2) realise the even pattern as matrices.
inline bool matches_even_pattern(const LambdaParams &l1, const LambdaParams &l2,
                                 double tol) {
  const cplx i(0.0, 1.0);
  const CMat2 expected = std::polar(1.0, -l1.phi()) *
                         CMat2(l1.d(), i * l1.b(), -i * l1.c(), l1.a());
  return max_abs_diff(expected, l2.matrix()) <= tol * std::max(1.0, max_abs(expected));
}

inline bool matches_odd_pattern(const LambdaParams &l1, const LambdaParams &l2,
                                double tol) {
  const cplx i(0.0, 1.0);
  const CMat2 expected = std::polar(1.0, l1.phi()) *
                         CMat2(l1.a(), -i * l1.b(), i * l1.c(), l1.d());
  return max_abs_diff(expected, l2.matrix()) <= tol * std::max(1.0, max_abs(expected));
}

} // namespace pointscatter
