#pragma once

#include <cmath>

#include "pointscatter/transfer_core.hpp"

namespace pointscatter {

struct ScatteringAmplitudes {
  cplx r;
  cplx t;
  double R = 0.0;
  double T = 0.0;
  double unitarity_defect = 0.0; // |R + T - 1|
};

/// r = -M21/M22, t = det(M)/M22 for a real energy outside the gap.
inline ScatteringAmplitudes scattering_amplitudes(const Arrangement &arr, double E,
                                                  const Tolerances &tol = default_tolerances) {
  if (std::abs(E) <= arr.mass())
    throw Error(ErrorCode::InvalidInput, "scattering needs |E| > m");
  const auto M = transfer_matrix(arr, cplx(E, 0.0), tol);
  if (M.m22() == cplx(0.0, 0.0))
    throw Error(ErrorCode::SingularMatrix, "M22 vanishes on the real axis");
  ScatteringAmplitudes out;
  out.r = -M.m21() / M.m22();
  out.t = M.det() / M.m22();
  out.R = std::norm(out.r);
  out.T = std::norm(out.t);
  out.unitarity_defect = std::abs(out.R + out.T - 1.0);
  return out;
}

/// S = (1/M22) [[-M21, 1], [det M, M12]].
inline CMat2 s_matrix(const Arrangement &arr, cplx E,
                      const Tolerances &tol = default_tolerances) {
  const auto M = transfer_matrix(arr, E, tol);
  const cplx inv = 1.0 / M.m22();
  return inv * CMat2(-M.m21(), 1.0, M.det(), M.m12());
}

} // namespace pointscatter
