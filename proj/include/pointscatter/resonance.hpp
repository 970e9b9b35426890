#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pointscatter/parallel.hpp"
#include "pointscatter/roots.hpp"
#include "pointscatter/special_cases.hpp"
#include "pointscatter/transfer_core.hpp"

namespace pointscatter {

struct ComplexRegion {
  double re_min = -12.0, re_max = 12.0;
  double im_min = -4.0, im_max = -2e-4;
};

/// Default pole window: Re E in [-6m, 6m], Im E in [-2m, -1e-9 m]. The upper
/// edge sits close to the axis so near-impermeable poles stay inside.
inline ComplexRegion default_resonance_region(double m) {
  return {-6.0 * m, 6.0 * m, -2.0 * m, -1e-9 * m};
}

struct SeedSpec {
  std::size_t nx = 64, ny = 32;
  int max_iter = 80;
  double pole_tol = 1e-10;       // |M22| budget, scaled by |Lambda1||Lambda2|
  double dedupe = 1e-8;          // units of m
  double threshold_gap = 1e-6;   // poles this close to +-m are threshold roots
  double real_axis_gap = 1e-6;   // |Im E| below this with |Re E| < m is bound-like
  unsigned threads = 0;
};

struct ResonancePole {
  double E_R = 0.0;
  double gamma = 0.0; // E = E_R - i gamma/2
  double residual = 0.0;
  cplx seed;
  int iterations = 0;
  bool below_minus_m = false; // principal branch gives Re k < 0 here

  cplx energy() const { return {E_R, -0.5 * gamma}; }
};

struct ResonanceSearch {
  std::vector<ResonancePole> poles;
  std::size_t seeds = 0;
  std::size_t dropped = 0; // seeds that did not converge to an accepted pole
};

namespace detail {

inline cplx m22(const Arrangement &arr, cplx E) {
  const cplx k = momentum(E, arr.mass());
  return transfer_matrix_k(arr, k, E).m22();
}

/// Derivative of an analytic function from four samples on a cross,
/// [f(z+h) - f(z-h) - i f(z+ih) + i f(z-ih)] / (4h).
template <typename F> cplx cross_derivative(F &&f, cplx z, double h) {
  const cplx i(0.0, 1.0);
  return (f(z + h) - f(z - h) - i * f(z + i * h) + i * f(z - i * h)) / (4.0 * h);
}

struct NewtonOutcome {
  bool ok = false;
  cplx root;
  int iterations = 0;
};

inline NewtonOutcome newton_pole(const Arrangement &arr, cplx seed,
                                 const std::vector<cplx> &deflate,
                                 const ComplexRegion &box, const SeedSpec &spec) {
  const double m = arr.mass();
  const double h = 1e-6 * m;
  const double max_step = m;
  const auto f = [&](cplx E) { return m22(arr, E); };
  const auto derivative = [&](cplx E) {
    const bool near_branch = std::abs(E - m) < 1e-3 * m || std::abs(E + m) < 1e-3 * m;
    if (near_branch)
      return (f(E + h) - f(E - h)) / (2.0 * h);
    return cross_derivative(f, E, h);
  };
  const auto outside = [&](cplx E) {
    const double w = box.re_max - box.re_min, t = box.im_max - box.im_min;
    return !std::isfinite(E.real()) || !std::isfinite(E.imag()) ||
           E.real() < box.re_min - 0.5 * w || E.real() > box.re_max + 0.5 * w ||
           E.imag() < box.im_min - t || E.imag() > m;
  };

  cplx E = seed;
  int it = 0;
  bool converged = false;
  for (; it < spec.max_iter; ++it) {
    if (std::abs(momentum(E, m)) < 1e-9 * m)
      return {};
    const cplx fv = f(E);
    cplx denom = derivative(E);
    if (!deflate.empty()) {
      cplx s = 0.0;
      for (const cplx &r : deflate)
        s += 1.0 / (E - r);
      denom -= fv * s;
    }
    if (denom == cplx(0.0, 0.0) || !std::isfinite(std::abs(denom)))
      return {};
    cplx step = fv / denom;
    if (std::abs(step) > max_step)
      step *= max_step / std::abs(step);
    E -= step;
    if (outside(E))
      return {};
    if (std::abs(step) < 1e-14 * std::max(m, std::abs(E))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    return {};
  // Polish on the undeflated function.
  for (int p = 0; p < 4; ++p) {
    if (std::abs(momentum(E, m)) < 1e-9 * m)
      return {};
    const cplx d = derivative(E);
    if (d == cplx(0.0, 0.0))
      break;
    const cplx step = f(E) / d;
    E -= step;
    if (std::abs(step) < 1e-15 * std::max(m, std::abs(E)))
      break;
  }
  return {true, E, it};
}

} // namespace detail

/// S-matrix poles (zeros of M22 under the principal branch) in a rectangle
/// of the lower half-plane. Seeds are processed one row at a time; inside a
/// row the Newton runs are independent and parallel, and the roots already
/// accepted from earlier rows are deflated. Merging follows seed order, so
/// the result does not depend on the thread count.
inline ResonanceSearch find_resonances(const Arrangement &arr,
                                       const ComplexRegion &region,
                                       const SeedSpec &spec = {}) {
  const double m = arr.mass();
  if (!(region.im_max <= 0.0) || !(region.im_min < region.im_max))
    throw Error(ErrorCode::InvalidInput, "pole region must lie in Im E <= 0");
  if (!std::isfinite(region.re_min) || !std::isfinite(region.re_max) ||
      !std::isfinite(region.im_min) || !(region.re_min < region.re_max))
    throw Error(ErrorCode::InvalidInput, "pole region must be a finite rectangle");
  if (spec.nx == 0 || spec.ny == 0)
    throw Error(ErrorCode::InvalidInput, "seed grid must be non-empty");

  const double scale = std::max(1.0, max_abs(arr.lambda1().matrix()) *
                                         max_abs(arr.lambda2().matrix()));
  const double accept = spec.pole_tol * scale;
  const double margin = 1e-9 * m;

  ResonanceSearch out;
  std::vector<cplx> found;
  const auto coord = [](double lo, double hi, std::size_t n, std::size_t i) {
    return n == 1 ? 0.5 * (lo + hi)
                  : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };

  for (std::size_t j = 0; j < spec.ny; ++j) {
    // Rows run from the real axis downwards.
    const double im = coord(region.im_max, region.im_min, spec.ny, j);
    const auto results = parallel_map(
        spec.nx,
        [&](std::size_t i) {
          const cplx seed(coord(region.re_min, region.re_max, spec.nx, i), im);
          return detail::newton_pole(arr, seed, found, region, spec);
        },
        spec.threads);

    for (std::size_t i = 0; i < spec.nx; ++i) {
      ++out.seeds;
      const auto &r = results[i];
      if (!r.ok) {
        ++out.dropped;
        continue;
      }
      const cplx E = r.root;
      const double res = std::abs(detail::m22(arr, E));
      const bool in_region = E.real() >= region.re_min - margin &&
                             E.real() <= region.re_max + margin &&
                             E.imag() >= region.im_min - margin &&
                             E.imag() <= std::min(region.im_max + margin, 0.0) && E.imag() < 0.0;
      const bool threshold = std::abs(E - m) < spec.threshold_gap * m ||
                             std::abs(E + m) < spec.threshold_gap * m;
      const bool bound_like = std::abs(E.real()) < m &&
                              std::abs(E.imag()) < spec.real_axis_gap * m;
      if (!(res < accept) || !in_region || threshold || bound_like) {
        ++out.dropped;
        continue;
      }
      const bool dup = std::any_of(found.begin(), found.end(), [&](cplx f) {
        return std::abs(f - E) <= spec.dedupe * m;
      });
      if (dup)
        continue;
      found.push_back(E);
      ResonancePole p;
      p.E_R = E.real();
      p.gamma = -2.0 * E.imag();
      p.residual = res;
      p.seed = cplx(coord(region.re_min, region.re_max, spec.nx, i), im);
      p.iterations = r.iterations;
      p.below_minus_m = E.real() < -m;
      out.poles.push_back(p);
    }
  }
  std::sort(out.poles.begin(), out.poles.end(),
            [](const ResonancePole &a, const ResonancePole &b) {
              return a.E_R < b.E_R || (a.E_R == b.E_R && a.gamma < b.gamma);
            });
  return out;
}

inline ResonanceSearch find_resonances(const Arrangement &arr, const SeedSpec &spec = {}) {
  return find_resonances(arr, default_resonance_region(arr.mass()), spec);
}

/// Special-case entry point. Impermeable strengths have no complex poles;
/// their real spectrum comes from impermeable_box_spectrum.
inline ResonanceSearch find_resonances(const SpecialCaseId &id, double m, double l,
                                       const ComplexRegion &region,
                                       const SeedSpec &spec = {}) {
  if (case_row(id.parity, id.kind).resonance_branches == 0)
    throw Error(ErrorCode::CaseHasNoResonances, case_name(id.parity, id.kind));
  std::optional<Arrangement> arr;
  try {
    arr = instantiate(id, m, l);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::ImpermeableInteraction)
      throw Error(ErrorCode::RegionOnRealAxisOnly,
                  "impermeable strength: use the impermeable box spectrum");
    throw;
  }
  return find_resonances(*arr, region, spec);
}

// ---------------------------------------------------------------------------
// Imaginary-part locus

struct LocusCurve {
  std::string case_tag;
  int branch = 0; // 0: "+" sign, 1: "-" sign (single-branch cases use 0)
  std::vector<cplx> points;
};

/// Momentum used on the locus: principal branch for Im E <= 0 and its
/// conjugate partner -conj(k(conj E)) above the axis, so the curves are
/// symmetric under E -> conj E.
inline cplx locus_momentum(cplx E, double m) {
  if (E.imag() > 0.0)
    return -std::conj(momentum(std::conj(E), m));
  return momentum(E, m);
}

namespace detail {

struct EdgePoint {
  bool valid = false;
  cplx z;
};

inline std::vector<std::vector<cplx>> chain_segments(
    const std::map<std::size_t, cplx> &nodes,
    const std::vector<std::pair<std::size_t, std::size_t>> &segments) {
  std::map<std::size_t, std::vector<std::size_t>> adj;
  for (const auto &[a, b] : segments) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::vector<cplx>> curves;
  std::map<std::pair<std::size_t, std::size_t>, bool> seg_used;
  const auto key = [](std::size_t a, std::size_t b) {
    return std::make_pair(std::min(a, b), std::max(a, b));
  };
  const auto walk = [&](std::size_t start) {
    std::vector<cplx> pts{nodes.at(start)};
    std::size_t cur = start;
    for (;;) {
      std::optional<std::size_t> next;
      for (std::size_t n : adj[cur])
        if (!seg_used[key(cur, n)]) {
          next = n;
          break;
        }
      if (!next)
        break;
      seg_used[key(cur, *next)] = true;
      pts.push_back(nodes.at(*next));
      cur = *next;
    }
    return pts;
  };
  // Open chains start at degree-one nodes, then the remaining closed loops.
  for (const auto &[id, nb] : adj)
    if (nb.size() == 1 && !seg_used[key(id, nb[0])])
      curves.push_back(walk(id));
  for (const auto &[id, nb] : adj)
    for (std::size_t n : nb)
      if (!seg_used[key(id, n)])
        curves.push_back(walk(id));
  return curves;
}

} // namespace detail

/// Zero level set of Im g(E) for the case's strength-independent resonance
/// expression g, by marching squares on an nx-by-ny grid with every edge
/// crossing refined by bisection until |Im g| < curve_tol. Crossings that
/// fail the tolerance (poles of g, the branch discontinuity on the real
/// axis) are discarded.
inline std::vector<LocusCurve> trace_imaginary_locus(Parity parity, CaseKind kind,
                                                     double m, double l,
                                                     const ComplexRegion &region,
                                                     std::size_t nx, std::size_t ny,
                                                     double curve_tol = 1e-6,
                                                     unsigned threads = 0) {
  const CaseRow &row = case_row(parity, kind);
  if (row.locus == nullptr)
    throw Error(ErrorCode::UnknownCase,
                case_name(parity, kind) + " has no registered resonance equation");
  if (nx < 2 || ny < 2)
    throw Error(ErrorCode::InvalidInput, "locus grid needs at least 2x2 points");

  const auto point = [&](std::size_t i, std::size_t j) {
    const double x = region.re_min + (region.re_max - region.re_min) *
                                         static_cast<double>(i) / static_cast<double>(nx - 1);
    const double y = region.im_min + (region.im_max - region.im_min) *
                                         static_cast<double>(j) / static_cast<double>(ny - 1);
    return cplx(x, y);
  };

  std::vector<LocusCurve> out;
  for (int branch = 0; branch < row.resonance_branches; ++branch) {
    const auto img = [&](cplx E) {
      const double v = row.locus(E, locus_momentum(E, m), m, l)[branch].imag();
      return std::isfinite(v) ? v : NAN;
    };
    const std::vector<double> vals = parallel_map(
        nx * ny, [&](std::size_t n) { return img(point(n % nx, n / nx)); }, threads);
    const auto val = [&](std::size_t i, std::size_t j) { return vals[j * nx + i]; };

    const std::size_t n_h = (nx - 1) * ny;
    const auto h_id = [&](std::size_t i, std::size_t j) { return j * (nx - 1) + i; };
    const auto v_id = [&](std::size_t i, std::size_t j) { return n_h + j * nx + i; };
    const auto refine = [&](cplx a, cplx b, double fa, double fb) -> detail::EdgePoint {
      if (!std::isfinite(fa) || !std::isfinite(fb) || fa == 0.0 || fb == 0.0 ||
          (fa < 0.0) == (fb < 0.0))
        return {};
      auto along = [&](double t) { return img(a + t * (b - a)); };
      const RealRoot r = bisect(along, 0.0, 1.0, fa, fb, 1e-15);
      if (!(r.residual < curve_tol))
        return {};
      return {true, a + r.x * (b - a)};
    };

    // Edge crossings, computed once per edge.
    std::vector<detail::EdgePoint> edges(n_h + nx * (ny - 1));
    std::vector<std::size_t> edge_ids;
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i + 1 < nx; ++i)
        edge_ids.push_back(h_id(i, j));
    for (std::size_t j = 0; j + 1 < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        edge_ids.push_back(v_id(i, j));
    const auto refined = parallel_map(
        edge_ids.size(),
        [&](std::size_t n) {
          const std::size_t id = edge_ids[n];
          if (id < n_h) {
            const std::size_t j = id / (nx - 1), i = id % (nx - 1);
            return refine(point(i, j), point(i + 1, j), val(i, j), val(i + 1, j));
          }
          const std::size_t r = id - n_h, j = r / nx, i = r % nx;
          return refine(point(i, j), point(i, j + 1), val(i, j), val(i, j + 1));
        },
        threads);
    for (std::size_t n = 0; n < edge_ids.size(); ++n)
      edges[edge_ids[n]] = refined[n];

    std::map<std::size_t, cplx> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      for (std::size_t i = 0; i + 1 < nx; ++i) {
        const std::size_t bottom = h_id(i, j), top = h_id(i, j + 1);
        const std::size_t left = v_id(i, j), right = v_id(i + 1, j);
        std::vector<std::size_t> hit;
        for (std::size_t e : {bottom, right, top, left})
          if (edges[e].valid)
            hit.push_back(e);
        for (std::size_t e : hit)
          nodes[e] = edges[e].z;
        if (hit.size() == 2) {
          segments.emplace_back(hit[0], hit[1]);
        } else if (hit.size() == 4) {
          const double centre = img(0.5 * (point(i, j) + point(i + 1, j + 1)));
          if ((centre < 0.0) == (val(i, j) < 0.0)) {
            segments.emplace_back(bottom, right);
            segments.emplace_back(top, left);
          } else {
            segments.emplace_back(left, bottom);
            segments.emplace_back(right, top);
          }
        }
      }
    }
    for (auto &pts : detail::chain_segments(nodes, segments))
      out.push_back({case_name(parity, kind), branch, std::move(pts)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Impermeable box

enum class BoxBoundary {
  even_pseudoscalar_plus2,
  even_pseudoscalar_minus2,
  odd_pseudoscalar_plus2,
  odd_pseudoscalar_minus2,
  even_scalar_plus2,
  even_scalar_minus2,
  odd_scalar_plus2,
  odd_scalar_minus2,
  equal_mixture_infinite,
  inverted_mixture_infinite,
};

struct BoxBoundaryName {
  BoxBoundary boundary;
  const char *name;
};

inline constexpr std::array<BoxBoundaryName, 10> box_boundary_names{{
    {BoxBoundary::even_pseudoscalar_plus2, "even/pseudoscalar/+2"},
    {BoxBoundary::even_pseudoscalar_minus2, "even/pseudoscalar/-2"},
    {BoxBoundary::odd_pseudoscalar_plus2, "odd/pseudoscalar/+2"},
    {BoxBoundary::odd_pseudoscalar_minus2, "odd/pseudoscalar/-2"},
    {BoxBoundary::even_scalar_plus2, "even/scalar/+2"},
    {BoxBoundary::even_scalar_minus2, "even/scalar/-2"},
    {BoxBoundary::odd_scalar_plus2, "odd/scalar/+2"},
    {BoxBoundary::odd_scalar_minus2, "odd/scalar/-2"},
    {BoxBoundary::equal_mixture_infinite, "equal-mixture/inf"},
    {BoxBoundary::inverted_mixture_infinite, "inverted-mixture/inf"},
}};

inline BoxBoundary parse_boundary(std::string_view name) {
  for (const auto &b : box_boundary_names)
    if (name == b.name)
      return b.boundary;
  throw Error(ErrorCode::UnknownBoundary, std::string(name));
}

inline const char *to_string(BoxBoundary b) {
  for (const auto &n : box_boundary_names)
    if (n.boundary == b)
      return n.name;
  return "?";
}

enum class BoxRegion { interior, left_exterior, right_exterior };

constexpr const char *to_string(BoxRegion r) {
  switch (r) {
  case BoxRegion::interior: return "interior";
  case BoxRegion::left_exterior: return "left-exterior";
  case BoxRegion::right_exterior: return "right-exterior";
  }
  return "?";
}

struct BoxLevel {
  double energy = 0.0;
  BoxRegion region = BoxRegion::interior;
};

namespace detail {

// One-sided conditions alpha . w = 0 in the real basis w = (u, i v), for
// the left (x-) and right (x+) sides of one impermeable point.
struct Wall {
  std::array<double, 2> left, right;
};

inline constexpr Wall wall_u{{1, 0}, {1, 0}};
inline constexpr Wall wall_v{{0, 1}, {0, 1}};
inline constexpr Wall wall_w_plus2{{0, 1}, {1, 0}};
inline constexpr Wall wall_w_minus2{{1, 0}, {0, 1}};
inline constexpr Wall wall_b_plus2{{1, 1}, {1, -1}};
inline constexpr Wall wall_b_minus2{{1, -1}, {1, 1}};

inline std::pair<Wall, Wall> box_walls(BoxBoundary b) {
  switch (b) {
  case BoxBoundary::even_pseudoscalar_plus2: return {wall_w_plus2, wall_w_minus2};
  case BoxBoundary::even_pseudoscalar_minus2: return {wall_w_minus2, wall_w_plus2};
  case BoxBoundary::odd_pseudoscalar_plus2: return {wall_w_plus2, wall_w_plus2};
  case BoxBoundary::odd_pseudoscalar_minus2: return {wall_w_minus2, wall_w_minus2};
  case BoxBoundary::even_scalar_plus2: return {wall_b_plus2, wall_b_plus2};
  case BoxBoundary::even_scalar_minus2: return {wall_b_minus2, wall_b_minus2};
  case BoxBoundary::odd_scalar_plus2: return {wall_b_plus2, wall_b_minus2};
  case BoxBoundary::odd_scalar_minus2: return {wall_b_minus2, wall_b_plus2};
  case BoxBoundary::equal_mixture_infinite: return {wall_u, wall_u};
  case BoxBoundary::inverted_mixture_infinite: return {wall_v, wall_v};
  }
  throw Error(ErrorCode::UnknownBoundary, "box boundary");
}

} // namespace detail

/// Real spectrum of the decoupled problem at an impermeable limit: levels of
/// the interval between the points (width l) and the states bound to the
/// outer side of either wall.
inline std::vector<BoxLevel> impermeable_box_spectrum(BoxBoundary boundary, double m,
                                                      double width,
                                                      double e_max = 0.0,
                                                      std::size_t grid = 8192,
                                                      unsigned threads = 0) {
  if (!(m > 0.0) || !(width > 0.0))
    throw Error(ErrorCode::InvalidInput, "box needs m > 0 and width > 0");
  if (e_max <= 0.0)
    e_max = 6.0 * m;
  const auto [w1, w2] = detail::box_walls(boundary);
  const std::array<double, 2> n{w1.right[1], -w1.right[0]};
  const std::array<double, 2> beta = w2.left;

  const auto interior = [&, n, beta](double E) {
    // Real free propagator in the w basis.
    const cplx k = momentum(E, m);
    const cplx kl = k * width;
    double c, s;
    if (std::abs(kl) < 1e-4) {
      const double k2l2 = (kl * kl).real();
      c = 1.0 - k2l2 / 2.0;
      s = width * (1.0 - k2l2 / 6.0);
    } else {
      c = std::cos(kl).real();
      s = (std::sin(kl) / k).real();
    }
    const double u0 = c * n[0] + (E + m) * s * n[1];
    const double u1 = -(E - m) * s * n[0] + c * n[1];
    return beta[0] * u0 + beta[1] * u1;
  };

  std::vector<BoxLevel> levels;
  for (const auto &r : scan_roots(interior, -e_max, e_max, grid, 1e-13 * m, threads))
    levels.push_back({r.x, BoxRegion::interior});

  const double lo = -m * (1.0 - 1e-9), hi = m * (1.0 - 1e-9);
  const auto left_ext = [&, a = w1.left](double E) {
    return a[0] * (E + m) + a[1] * gap_kappa(E, m);
  };
  const auto right_ext = [&, a = w2.right](double E) {
    return a[0] * (E + m) - a[1] * gap_kappa(E, m);
  };
  for (const auto &r : scan_roots(left_ext, lo, hi, grid, 1e-13 * m, threads))
    levels.push_back({r.x, BoxRegion::left_exterior});
  for (const auto &r : scan_roots(right_ext, lo, hi, grid, 1e-13 * m, threads))
    levels.push_back({r.x, BoxRegion::right_exterior});

  std::stable_sort(levels.begin(), levels.end(),
                   [](const BoxLevel &a, const BoxLevel &b) { return a.energy < b.energy; });
  return levels;
}

} // namespace pointscatter
