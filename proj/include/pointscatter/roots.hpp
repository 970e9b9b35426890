#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pointscatter/parallel.hpp"

namespace pointscatter {

struct RealRoot {
  double x = 0.0;
  double residual = 0.0; // |f(x)|
};

/// Bisection on a bracket with f(lo) and f(hi) of opposite sign. Runs until
/// the bracket is below xtol or cannot shrink any further, then returns the
/// endpoint with the smaller |f|.
template <typename F>
RealRoot bisect(F &&f, double lo, double hi, double flo, double fhi, double xtol) {
  for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double fm = f(mid);
    if (fm == 0.0)
      return {mid, 0.0};
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? RealRoot{lo, std::abs(flo)}
                                        : RealRoot{hi, std::abs(fhi)};
}

/// Samples f at n uniform points on [lo, hi], brackets every sign change and
/// refines it by bisection. Grid evaluation is parallel; the root list is in
/// ascending order and independent of the thread count.
template <typename F>
std::vector<RealRoot> scan_roots(F &&f, double lo, double hi, std::size_t n,
                                 double xtol, unsigned threads = 0) {
  std::vector<RealRoot> roots;
  if (n < 2 || !(hi > lo))
    return roots;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  const auto node = [&](std::size_t j) {
    return j + 1 == n ? hi : lo + step * static_cast<double>(j);
  };
  const std::vector<double> vals =
      parallel_map(n, [&](std::size_t j) { return f(node(j)); }, threads);
  for (std::size_t j = 0; j < n; ++j) {
    if (vals[j] == 0.0) {
      roots.push_back({node(j), 0.0});
      continue;
    }
    if (j + 1 < n && vals[j + 1] != 0.0 && std::isfinite(vals[j]) &&
        std::isfinite(vals[j + 1]) && (vals[j] < 0.0) != (vals[j + 1] < 0.0))
      roots.push_back(bisect(f, node(j), node(j + 1), vals[j], vals[j + 1], xtol));
  }
  return roots;
}

} // namespace pointscatter
