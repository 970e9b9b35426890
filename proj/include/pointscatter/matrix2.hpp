#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "pointscatter/errors.hpp"

namespace pointscatter {

using cplx = std::complex<double>;

/// Dense 2x2 matrix, row-major. Small enough that every operation is spelled
/// out; all the transfer-matrix algebra goes through this type.
template <typename T> struct Matrix2 {
  std::array<T, 4> e{T(1), T(0), T(0), T(1)};

  constexpr Matrix2() = default;
  constexpr Matrix2(T m11, T m12, T m21, T m22) : e{m11, m12, m21, m22} {}

  static constexpr Matrix2 identity() { return {}; }
  static constexpr Matrix2 zero() { return {T(0), T(0), T(0), T(0)}; }

  // 1-based, matching the physics notation M_11 .. M_22
  constexpr T &operator()(int i, int j) { return e[(i - 1) * 2 + (j - 1)]; }
  constexpr const T &operator()(int i, int j) const {
    return e[(i - 1) * 2 + (j - 1)];
  }

  constexpr T m11() const { return e[0]; }
  constexpr T m12() const { return e[1]; }
  constexpr T m21() const { return e[2]; }
  constexpr T m22() const { return e[3]; }

  constexpr T det() const { return e[0] * e[3] - e[1] * e[2]; }
  constexpr T trace() const { return e[0] + e[3]; }

  Matrix2 inverse() const {
    const T d = det();
    if (d == T(0))
      throw Error(ErrorCode::SingularMatrix, "2x2 matrix has zero determinant");
    return {e[3] / d, -e[1] / d, -e[2] / d, e[0] / d};
  }

  /// Adjugate; equals det() * inverse() but exists for singular matrices.
  constexpr Matrix2 adjugate() const { return {e[3], -e[1], -e[2], e[0]}; }

  friend constexpr Matrix2 operator*(const Matrix2 &a, const Matrix2 &b) {
    return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
            a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
  }
  friend constexpr Matrix2 operator*(T s, const Matrix2 &a) {
    return {s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]};
  }
  friend constexpr Matrix2 operator+(const Matrix2 &a, const Matrix2 &b) {
    return {a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]};
  }
  friend constexpr Matrix2 operator-(const Matrix2 &a, const Matrix2 &b) {
    return {a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]};
  }
};

using CMat2 = Matrix2<cplx>;
using RMat2 = Matrix2<double>;

/// Largest entrywise modulus of a - b.
template <typename T>
double max_abs_diff(const Matrix2<T> &a, const Matrix2<T> &b) {
  double out = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    out = std::max(out, static_cast<double>(std::abs(a.e[i] - b.e[i])));
  return out;
}

template <typename T> double max_abs(const Matrix2<T> &a) {
  double out = 0.0;
  for (const auto &x : a.e)
    out = std::max(out, static_cast<double>(std::abs(x)));
  return out;
}

} // namespace pointscatter
