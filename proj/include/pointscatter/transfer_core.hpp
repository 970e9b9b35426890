#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "pointscatter/lambda_algebra.hpp"
#include "pointscatter/matrix2.hpp"

namespace pointscatter {

/// k(E) = sqrt(E - m) sqrt(E + m) with principal roots on each factor.
inline cplx momentum(cplx E, double m) {
  return std::sqrt(E - m) * std::sqrt(E + m);
}

inline cplx momentum(double E, double m) {
  return momentum(cplx(E, 0.0), m);
}

/// kappa = sqrt(m^2 - E^2) for a real energy inside the gap.
inline double gap_kappa(double E, double m) {
  return std::sqrt((m - E) * (m + E));
}

/// P(k, x): columns are the right- and left-moving plane-wave spinors.
inline CMat2 plane_wave_matrix(cplx k, cplx E, double m, double x) {
  if (E == cplx(-m, 0.0))
    throw Error(ErrorCode::SingularMatrix, "E = -m in plane-wave matrix");
  if (k == cplx(0.0, 0.0))
    throw Error(ErrorCode::SingularMatrix,
                "k = 0: use the critical or supercritical forms");
  const cplx i(0.0, 1.0);
  const cplx ep = std::exp(i * k * x);
  const cplx em = std::exp(-i * k * x);
  const cplx r = k / (E + m);
  return {ep, em, r * ep, -r * em};
}

/// Inverse of P(k, x), written out to avoid a generic 2x2 inversion.
inline CMat2 plane_wave_inverse(cplx k, cplx E, double m, double x) {
  if (k == cplx(0.0, 0.0) || E == cplx(-m, 0.0))
    throw Error(ErrorCode::SingularMatrix, "plane-wave matrix is singular");
  const cplx i(0.0, 1.0);
  const cplx ep = std::exp(i * k * x);
  const cplx em = std::exp(-i * k * x);
  const cplx s = (E + m) / k;
  return {0.5 * em, 0.5 * s * em, 0.5 * ep, -0.5 * s * ep};
}

/// Free Dirac propagation of (u, v) over a distance L. Finite at k = 0.
inline CMat2 free_propagator(cplx E, double m, double L) {
  const cplx k = momentum(E, m);
  const cplx kl = k * L;
  cplx c, s;
  if (std::abs(kl) < 1e-4) {
    const cplx k2l2 = kl * kl;
    c = 1.0 - k2l2 / 2.0 + k2l2 * k2l2 / 24.0;
    s = L * (1.0 - k2l2 / 6.0 + k2l2 * k2l2 / 120.0);
  } else {
    c = std::cos(kl);
    s = std::sin(kl) / k;
  }
  const cplx i(0.0, 1.0);
  return {c, i * (E + m) * s, i * (E - m) * s, c};
}

enum class TransferKind { scattering, critical, supercritical };

struct TransferMatrix2 {
  CMat2 matrix;
  TransferKind kind = TransferKind::scattering;
  std::optional<cplx> energy; // empty for the threshold forms

  cplx m11() const { return matrix.m11(); }
  cplx m12() const { return matrix.m12(); }
  cplx m21() const { return matrix.m21(); }
  cplx m22() const { return matrix.m22(); }
  cplx det() const { return matrix.det(); }
};

namespace detail {

inline CMat2 conjugated(const CMat2 &lambda, const CMat2 &p, const CMat2 &pinv) {
  return pinv * lambda * p;
}

inline void require_nonzero_k(cplx k, double m, const Tolerances &tol) {
  if (std::abs(k) < tol.near_singular * m)
    throw Error(ErrorCode::SingularMatrix,
                "|k| below the near-singular guard; use threshold detectors");
}

} // namespace detail

/// Transfer matrix for interactions at arbitrary positions x1, x2 and an
/// explicitly chosen momentum k (any branch).
inline CMat2 transfer_matrix_at(const LambdaParams &l1, const LambdaParams &l2,
                                cplx k, cplx E, double m, double x1, double x2) {
  const CMat2 f1 = detail::conjugated(l1.matrix(), plane_wave_matrix(k, E, m, x1),
                                      plane_wave_inverse(k, E, m, x1));
  const CMat2 f2 = detail::conjugated(l2.matrix(), plane_wave_matrix(k, E, m, x2),
                                      plane_wave_inverse(k, E, m, x2));
  return f2 * f1;
}

inline CMat2 transfer_matrix_k(const Arrangement &arr, cplx k, cplx E) {
  return transfer_matrix_at(arr.lambda1(), arr.lambda2(), k, E, arr.mass(),
                            arr.x1(), arr.x2());
}

inline TransferMatrix2 transfer_matrix(const Arrangement &arr, cplx E,
                                       const Tolerances &tol = default_tolerances) {
  const cplx k = momentum(E, arr.mass());
  detail::require_nonzero_k(k, arr.mass(), tol);
  return {transfer_matrix_k(arr, k, E), TransferKind::scattering, E};
}

/// Gamma = Lambda2 P(x2) P^{-1}(x1) Lambda1. The middle factor is the free
/// propagator, so this stays finite at the thresholds.
inline CMat2 connection_matrix(const Arrangement &arr, cplx E) {
  return arr.lambda2().matrix() *
         free_propagator(E, arr.mass(), arr.separation()) *
         arr.lambda1().matrix();
}

enum class ParityClass { even, odd, gauge_phase, undefined };

constexpr const char *to_string(ParityClass p) {
  switch (p) {
  case ParityClass::even: return "even";
  case ParityClass::odd: return "odd";
  case ParityClass::gauge_phase: return "gauge-phase";
  case ParityClass::undefined: return "undefined";
  }
  return "?";
}

struct SinglePointLimit {
  CMat2 matrix;
  ParityClass parity = ParityClass::undefined;
};

/// The l -> 0+ limit Lambda2 Lambda1 for a parity-tagged arrangement, in the
/// closed form of the base point's parameters, plus its classification.
inline SinglePointLimit single_point_limit(const Arrangement &arr,
                                           double tol = 1e-12) {
  const LambdaParams &p = arr.lambda1();
  const double a = p.a(), b = p.b(), c = p.c(), d = p.d();
  const cplx i(0.0, 1.0);
  if (arr.parity() == Parity::even) {
    return {CMat2(1.0 + 2.0 * b * c, 2.0 * i * b * d, -2.0 * i * a * c,
                  1.0 + 2.0 * b * c),
            ParityClass::even};
  }
  if (arr.parity() != Parity::odd)
    throw Error(ErrorCode::InvalidInput,
                "single-point limit needs an even or odd arrangement");

  const cplx ph = std::polar(1.0, 2.0 * p.phi());
  const CMat2 mat = ph * CMat2(a * a - b * c, i * b * (a - d),
                               i * c * (a - d), d * d - b * c);
  const double scale = std::max({1.0, std::abs(a), std::abs(d)});
  const auto near = [&](double x, double y) { return std::abs(x - y) <= tol * scale; };
  ParityClass cls = ParityClass::undefined;
  if (near(a, d))
    cls = ParityClass::gauge_phase;
  else if (near(b, 0.0) && near(c, 0.0))
    cls = ParityClass::odd;
  else if (near(a, -d) && (std::abs(p.phi()) <= tol ||
                           std::abs(p.phi() - std::numbers::pi / 2) <= tol))
    cls = ParityClass::even;
  return {mat, cls};
}

inline CMat2 critical_plane_matrix(double m, double x) {
  const cplx i(0.0, 1.0);
  return {2.0 * i * m * x, 1.0, 1.0, 0.0};
}

inline CMat2 supercritical_plane_matrix(double m, double x) {
  const cplx i(0.0, 1.0);
  return {1.0, 0.0, -2.0 * i * m * x, 1.0};
}

inline TransferMatrix2 critical_transfer(const Arrangement &arr) {
  const double m = arr.mass();
  const auto factor = [&](const LambdaParams &l, double x) {
    const CMat2 p = critical_plane_matrix(m, x);
    const cplx i(0.0, 1.0);
    const CMat2 pinv(0.0, 1.0, 1.0, -2.0 * i * m * x);
    return pinv * l.matrix() * p;
  };
  return {factor(arr.lambda2(), arr.x2()) * factor(arr.lambda1(), arr.x1()),
          TransferKind::critical, std::nullopt};
}

inline TransferMatrix2 supercritical_transfer(const Arrangement &arr) {
  const double m = arr.mass();
  const auto factor = [&](const LambdaParams &l, double x) {
    const CMat2 p = supercritical_plane_matrix(m, x);
    const cplx i(0.0, 1.0);
    const CMat2 pinv(1.0, 0.0, 2.0 * i * m * x, 1.0);
    return pinv * l.matrix() * p;
  };
  return {factor(arr.lambda2(), arr.x2()) * factor(arr.lambda1(), arr.x1()),
          TransferKind::supercritical, std::nullopt};
}

} // namespace pointscatter
