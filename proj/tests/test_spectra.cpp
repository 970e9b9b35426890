#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "pointscatter/scattering.hpp"
#include "pointscatter/special_cases.hpp"
#include "pointscatter/spectra.hpp"

using namespace pointscatter;
using Catch::Approx;

namespace {

constexpr double m = 2.0, l = 1.0;

Arrangement make_case(Parity p, CaseKind k, double g, double mass = m, double sep = l) {
  return instantiate({p, k, g}, mass, sep);
}

std::vector<double> energies(const SpectrumReport &r) {
  std::vector<double> out;
  for (const auto &s : r.bound_states)
    out.push_back(s.energy);
  return out;
}

void require_same(const std::vector<double> &got, const std::vector<double> &want,
                  double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(std::abs(got[i] - want[i]) < tol);
}

bool threw_code(ErrorCode code, const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code() == code;
  }
  return false;
}

} // namespace

TEST_CASE("critical detection", "[spectra]") {
  CHECK(check_critical(make_case(Parity::even, CaseKind::equal_mixture, -0.25)).holds);
  CHECK(check_critical(Arrangement::free(m, l)).holds);
  const double crit = 2 * (2 + std::sqrt(5.0));
  CHECK(check_critical(make_case(Parity::even, CaseKind::electrostatic, crit)).holds);
  CHECK_FALSE(check_critical(make_case(Parity::even, CaseKind::equal_mixture, -0.3)).holds);
  // The residual reported is |M^crit_12|.
  const auto r = check_critical(make_case(Parity::even, CaseKind::equal_mixture, -1.0));
  CHECK(r.residual == Approx(2.0 * 2.0 * std::abs(1.0 - 2.0 * m * l)));
}

TEST_CASE("supercritical detection", "[spectra]") {
  for (double g : {-3.0, -0.25, 0.0, 0.7, 10.0})
    CHECK(check_supercritical(make_case(Parity::even, CaseKind::equal_mixture, g)).holds);
  const double super = 2 * (-2 + std::sqrt(5.0));
  CHECK(check_supercritical(make_case(Parity::even, CaseKind::electrostatic, super)).holds);
  for (double B : {-1.5, -0.3, 0.5, 1.9})
    CHECK_FALSE(check_supercritical(make_case(Parity::odd, CaseKind::scalar, B)).holds);
}

TEST_CASE("threshold closed forms agree with the general matrices", "[spectra][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.5, 2.5), ph(0.0, std::numbers::pi),
      sep(0.0, 3.0);
  for (int n = 0; n < 1000; ++n) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.1)
      continue;
    const auto base = LambdaParams::make(ph(rng), a, b, c, (1 + b * c) / a);
    // Both checks throw if the closed form and the matrix disagree.
    CHECK_NOTHROW(check_critical(make_even_arrangement(base, 1.3, sep(rng))));
    CHECK_NOTHROW(check_supercritical(make_even_arrangement(base, 1.3, sep(rng))));
    CHECK_NOTHROW(check_critical(make_odd_arrangement(base, 0.7, sep(rng))));
    CHECK_NOTHROW(check_supercritical(make_odd_arrangement(base, 0.7, sep(rng))));
  }
}

TEST_CASE("bound states match the explicit case equations", "[spectra]") {
  SECTION("even equal mixture, A0 = -1: ground and excited state") {
    const auto rep = find_bound_states(make_case(Parity::even, CaseKind::equal_mixture, -1));
    require_same(energies(rep), oracle::even_equal_bound(-1, m, l), 1e-10);
    REQUIRE(rep.bound_states.size() == 2);
    // The lower root carries the "+" sign of the case equation (ground state).
    CHECK(rep.bound_states[0].branch == +1);
    CHECK(rep.bound_states[1].branch == -1);
  }
  SECTION("odd equal mixture, A0 = -1: a single state") {
    const auto rep = find_bound_states(make_case(Parity::odd, CaseKind::equal_mixture, -1));
    require_same(energies(rep), oracle::odd_equal_bound(-1, m, l), 1e-10);
  }
  SECTION("pseudoscalar pairs never bind") {
    for (double W : {-5.0, -1.0, 0.3, 1.0, 1.99, 3.0}) {
      CHECK(find_bound_states(make_case(Parity::even, CaseKind::pseudoscalar, W))
                .bound_states.empty());
      CHECK(find_bound_states(make_case(Parity::odd, CaseKind::pseudoscalar, W))
                .bound_states.empty());
    }
  }
  SECTION("the remaining closed-form cases") {
    for (double g : {-1.7, -0.6, -0.2, 0.3, 1.1, 1.8}) {
      require_same(energies(find_bound_states(make_case(Parity::even, CaseKind::scalar, g))),
                   oracle::even_scalar_bound(g, m, l), 1e-9);
      require_same(
          energies(find_bound_states(make_case(Parity::even, CaseKind::electrostatic, g))),
          oracle::even_electro_bound(g, m, l), 1e-9);
      require_same(energies(find_bound_states(make_case(Parity::odd, CaseKind::scalar, g))),
                   oracle::odd_scalar_bound(g, m, l), 1e-9);
      require_same(
          energies(find_bound_states(make_case(Parity::odd, CaseKind::electrostatic, g))),
          oracle::odd_electro_bound(g, m, l), 1e-9);
    }
  }
}

TEST_CASE("bound-state counts", "[spectra]") {
  for (double A0 : {-3.0, -0.4, 0.2, 2.5})
    CHECK(count_bound_states(make_case(Parity::odd, CaseKind::electrostatic, A0)) == 2);
  for (double A0 : {0.01, 0.5, 4.0})
    CHECK(count_bound_states(make_case(Parity::even, CaseKind::equal_mixture, A0)) == 0);
  CHECK(count_bound_states(Arrangement::free(m, l)) == 0);
}

TEST_CASE("every reported root satisfies both residual forms", "[spectra][property]") {
  for (const auto &row : case_table()) {
    for (double g : {-1.9, -1.1, -0.45, -0.1, 0.15, 0.8, 1.6, 3.3}) {
      const auto arr = make_case(row.parity, row.kind, g);
      ScanSpec scan;
      scan.cross_validate = true;
      const auto rep = find_bound_states(arr, scan);
      for (const auto &s : rep.bound_states) {
        CHECK(s.energy > -m);
        CHECK(s.energy < m);
        const auto M = transfer_matrix_k(arr, cplx(0, gap_kappa(s.energy, m)), s.energy);
        CHECK(std::abs(bound_function(arr, s.energy)) < 1e-10 * std::max(1.0, max_abs(M)));
        const auto r = closed_form_bound_residuals(arr, s.energy);
        CHECK(std::min(std::abs(r[0]), std::abs(r[1])) < 1e-9);
      }
      for (std::size_t i = 1; i < rep.bound_states.size(); ++i)
        CHECK(rep.bound_states[i - 1].energy < rep.bound_states[i].energy);
    }
  }
}

TEST_CASE("closed-form fast path agrees with the general scan", "[spectra]") {
  for (const auto &row : case_table())
    for (double g : {-1.3, -0.35, 0.6, 1.4}) {
      const auto arr = make_case(row.parity, row.kind, g);
      const auto fast = find_bound_states_closed_form(arr);
      CHECK(fast.method == (row.parity == Parity::even ? SpectrumMethod::even_closed_form
                                                       : SpectrumMethod::odd_closed_form));
      require_same(energies(fast), energies(find_bound_states(arr)), 1e-9 * m);
    }
}

TEST_CASE("mixtures are mirror images under E -> -E", "[spectra]") {
  for (Parity p : {Parity::even, Parity::odd})
    for (double g : {-2.0, -0.8, -0.3, -0.1, 0.4, 1.2}) {
      auto eq = energies(find_bound_states(make_case(p, CaseKind::equal_mixture, g)));
      auto inv = energies(find_bound_states(make_case(p, CaseKind::inverted_mixture, g)));
      for (double &e : inv)
        e = -e;
      std::sort(inv.begin(), inv.end());
      require_same(inv, eq, 1e-10);
    }
}

TEST_CASE("odd scalar and odd electrostatic spectra are symmetric", "[spectra]") {
  for (CaseKind k : {CaseKind::scalar, CaseKind::electrostatic})
    for (double g : {-1.5, -0.5, 0.25, 0.9, 3.0}) {
      const auto e = energies(find_bound_states(make_case(Parity::odd, k, g)));
      REQUIRE(e.size() == 2);
      CHECK(std::abs(e[0] + e[1]) < 1e-10);
    }
}

TEST_CASE("strength symmetries of the bound spectra", "[spectra]") {
  const auto same = [](Parity p, CaseKind k, double g, double h) {
    require_same(energies(find_bound_states(make_case(p, k, g))),
                 energies(find_bound_states(make_case(p, k, h))), 1e-10);
  };
  for (double g : {-3.0, -0.7, 0.3, 1.7}) {
    same(Parity::even, CaseKind::electrostatic, g, -4.0 / g);
    same(Parity::even, CaseKind::scalar, g, 4.0 / g);
    same(Parity::odd, CaseKind::equal_mixture, g, -g);
  }
}

TEST_CASE("odd pairs of odd interactions never bind", "[spectra][property]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> a(0.05, 5.0), ph(0.0, std::numbers::pi),
      sep(0.01, 4.0);
  for (int n = 0; n < 200; ++n) {
    const double x = a(rng) * (n % 2 ? 1 : -1);
    const auto arr =
        make_odd_arrangement(LambdaParams::make(ph(rng), x, 0, 0, 1 / x), 1.0, sep(rng));
    CHECK(find_bound_states(arr).bound_states.empty());
  }
}

TEST_CASE("scan output does not depend on the thread count", "[spectra]") {
  const auto arr = make_case(Parity::even, CaseKind::scalar, -1.0);
  ScanSpec one, many;
  one.threads = 1;
  many.threads = 7;
  const auto a = find_bound_states(arr, one), b = find_bound_states(arr, many);
  REQUIRE(a.bound_states.size() == b.bound_states.size());
  for (std::size_t i = 0; i < a.bound_states.size(); ++i)
    CHECK(a.bound_states[i].energy == b.bound_states[i].energy);
}

TEST_CASE("unresolved doublets are reported", "[spectra]") {
  // At large separation the even doublet splits by ~e^{-kappa l}, far below
  // a coarse grid spacing.
  const auto arr = make_case(Parity::even, CaseKind::equal_mixture, -1.0, m, 6.0);
  ScanSpec scan;
  scan.grid = 64;
  scan.cross_validate = true;
  CHECK(threw_code(ErrorCode::GridTooCoarse, [&] { find_bound_states(arr, scan); }));
  CHECK(find_bound_states_closed_form(arr).bound_states.size() == 2);
}

TEST_CASE("scattering amplitudes", "[scattering]") {
  SECTION("free transmission is perfect") {
    for (double E : {2.1, 3.0, 11.0, -2.5, -9.0}) {
      const auto s = scattering_amplitudes(Arrangement::free(m, l), E);
      CHECK(s.T == Approx(1.0).epsilon(1e-15));
      CHECK(s.R < 1e-30);
    }
  }
  SECTION("flux conservation on random arrangements") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2.5, 2.5), ph(0.0, std::numbers::pi),
        e(1.0, 6.0);
    double worst = 0.0;
    for (int n = 0; n < 300; ++n) {
      const auto lam = [&] {
        for (;;) {
          const double a = u(rng), b = u(rng), c = u(rng);
          if (std::abs(a) > 0.1)
            return LambdaParams::make(ph(rng), a, b, c, (1 + b * c) / a);
        }
      };
      const auto arr = Arrangement::make(lam(), lam(), m, 1.3, Parity::general);
      for (int j = 0; j < 20; ++j)
        worst = std::max(worst, scattering_amplitudes(arr, m * e(rng)).unitarity_defect);
    }
    CHECK(worst < 1e-12);
  }
  SECTION("S-matrix entries reuse r and t") {
    const auto arr = make_case(Parity::even, CaseKind::scalar, 1.5);
    const auto s = scattering_amplitudes(arr, 5.0);
    const auto S = s_matrix(arr, cplx(5.0, 0.0));
    CHECK(std::abs(S.m11() - s.r) < 1e-13);
    CHECK(std::abs(S.m21() - s.t) < 1e-13);
  }
  SECTION("gap energies are rejected") {
    CHECK_THROWS_AS(scattering_amplitudes(Arrangement::free(m, l), 0.5), Error);
  }
}
