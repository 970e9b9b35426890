#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pointscatter/resonance.hpp"
#include "pointscatter/scattering.hpp"
#include "pointscatter/special_cases.hpp"
#include "pointscatter/spectra.hpp"

using namespace pointscatter;
using Catch::Approx;

namespace {

constexpr double m = 2.0, l = 1.0;

std::vector<double> energies(const Arrangement &arr) {
  std::vector<double> out;
  for (const auto &s : find_bound_states(arr).bound_states)
    out.push_back(s.energy);
  return out;
}

std::vector<double> registry_roots(const SpecialCaseId &id, double mass, double sep) {
  std::vector<double> out;
  const int branches = case_row(id.parity, id.kind).bound_branches;
  for (int b = 0; b < branches; ++b) {
    auto f = [&](double E) { return bound_residual(id, E, mass, sep).value[b]; };
    for (double E : oracle::roots_in_gap(f, mass, 8000))
      out.push_back(E);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [&](double a, double b) { return std::abs(a - b) < 1e-9 * mass; }),
            out.end());
  return out;
}

template <typename Fn> ErrorCode code_of(Fn &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::InternalError;
}

/// Single point interaction placed alone (second point is the identity).
Arrangement single(const LambdaParams &p, double mass) {
  return Arrangement::make(p, LambdaParams{}, mass, 0.0, Parity::general);
}

} // namespace

TEST_CASE("case identifiers round-trip through their names", "[cases]") {
  for (const auto &row : case_table()) {
    const auto name = case_name(row.parity, row.kind);
    const auto [p, k] = parse_case(name);
    CHECK(p == row.parity);
    CHECK(k == row.kind);
  }
  CHECK(case_name(Parity::even, CaseKind::equal_mixture) == "even/equal-mixture");
  CHECK(code_of([] { parse_case("even/unknown"); }) == ErrorCode::UnknownCase);
  CHECK(case_table().size() == 12);
}

TEST_CASE("instantiation uses the documented parameters", "[cases]") {
  SECTION("even equal mixture") {
    const auto arr = instantiate({Parity::even, CaseKind::equal_mixture, 0.7}, m, l);
    for (const auto *p : {&arr.lambda1(), &arr.lambda2()}) {
      CHECK(p->phi() == 0.0);
      CHECK(p->a() == 1.0);
      CHECK(p->d() == 1.0);
      CHECK(p->b() == 0.0);
      CHECK(p->c() == Approx(1.4));
    }
  }
  SECTION("even scalar") {
    const double B = 1.2;
    const auto p = instantiate({Parity::even, CaseKind::scalar, B}, m, l).lambda1();
    CHECK(p.a() == Approx((4 + B * B) / (4 - B * B)));
    CHECK(p.d() == Approx((4 + B * B) / (4 - B * B)));
    CHECK(p.b() == Approx(4 * B / (4 - B * B)));
    CHECK(p.c() == Approx(4 * B / (4 - B * B)));
  }
  SECTION("odd electrostatic") {
    const double A0 = 0.9;
    const auto p = instantiate({Parity::odd, CaseKind::electrostatic, A0}, m, l).lambda1();
    CHECK(p.a() == Approx((4 - A0 * A0) / (4 + A0 * A0)));
    CHECK(p.c() == Approx(4 * A0 / (4 + A0 * A0)));
    CHECK(p.b() == Approx(-4 * A0 / (4 + A0 * A0)));
  }
  SECTION("impermeable strengths are refused") {
    for (double g : {2.0, -2.0}) {
      CHECK(code_of([&] { instantiate({Parity::even, CaseKind::pseudoscalar, g}, m, l); }) ==
            ErrorCode::ImpermeableInteraction);
      CHECK(code_of([&] { instantiate({Parity::odd, CaseKind::scalar, g}, m, l); }) ==
            ErrorCode::ImpermeableInteraction);
    }
  }
}

TEST_CASE("registry bound residuals reproduce the explicit case equations", "[cases]") {
  for (double g : {-1.7, -1.0, -0.6, -0.3, 0.4, 1.1, 1.8}) {
    CHECK_THAT(registry_roots({Parity::even, CaseKind::equal_mixture, g}, m, l),
               Catch::Matchers::Approx(oracle::even_equal_bound(g, m, l)).margin(1e-9));
    CHECK_THAT(registry_roots({Parity::odd, CaseKind::equal_mixture, g}, m, l),
               Catch::Matchers::Approx(oracle::odd_equal_bound(g, m, l)).margin(1e-9));
    CHECK_THAT(registry_roots({Parity::even, CaseKind::scalar, g}, m, l),
               Catch::Matchers::Approx(oracle::even_scalar_bound(g, m, l)).margin(1e-9));
    CHECK_THAT(registry_roots({Parity::even, CaseKind::electrostatic, g}, m, l),
               Catch::Matchers::Approx(oracle::even_electro_bound(g, m, l)).margin(1e-9));
    CHECK_THAT(registry_roots({Parity::odd, CaseKind::scalar, g}, m, l),
               Catch::Matchers::Approx(oracle::odd_scalar_bound(g, m, l)).margin(1e-9));
    CHECK_THAT(registry_roots({Parity::odd, CaseKind::electrostatic, g}, m, l),
               Catch::Matchers::Approx(oracle::odd_electro_bound(g, m, l)).margin(1e-9));
  }
}

TEST_CASE("bound residual edge cases", "[cases]") {
  SECTION("even pseudoscalar residual never changes sign") {
    for (double W : {0.2, 1.0, 1.9, -1.3, 5.0})
      CHECK(registry_roots({Parity::even, CaseKind::pseudoscalar, W}, m, l).empty());
  }
  SECTION("odd equal mixture at large separation approaches a single interaction") {
    for (double A0 : {-1.5, -0.5, 0.8}) {
      const double sep = 50.0 / m;
      const auto roots = registry_roots({Parity::odd, CaseKind::equal_mixture, A0}, m, sep);
      REQUIRE(roots.size() == 1);
      CHECK(roots[0] == Approx((1 - A0 * A0) / (1 + A0 * A0) * m).margin(1e-9));
    }
  }
  SECTION("zero strength is free") {
    CHECK(registry_roots({Parity::even, CaseKind::equal_mixture, 0.0}, m, l).empty());
  }
  SECTION("magnetostatic has no bound equation") {
    CHECK(code_of([] {
            bound_residual({Parity::even, CaseKind::magnetostatic, 1.0}, 0.0, m, l);
          }) == ErrorCode::CaseHasNoBoundEquation);
    CHECK(code_of([] {
            resonance_residual({Parity::odd, CaseKind::magnetostatic, 1.0}, {1, -1}, m, l);
          }) == ErrorCode::CaseHasNoResonances);
  }
}

TEST_CASE("resonance residual structure", "[cases]") {
  const cplx E(3.1, -0.4);
  for (double W : {0.5, 1.0, 1.7}) {
    const auto even = resonance_residual({Parity::even, CaseKind::pseudoscalar, W}, E, m, l);
    const auto odd = resonance_residual({Parity::odd, CaseKind::pseudoscalar, W}, E, m, l);
    // Even and odd differ only in the sign of the squared strength factor.
    const double q = 4 * W / (4 + W * W);
    CHECK(std::abs(even.value[0] - odd.value[0] + 2 * q * q) < 1e-14);
  }
  for (double B : {0.5, 1.5, -0.8}) {
    const auto a = resonance_residual({Parity::even, CaseKind::scalar, B}, E, m, l);
    const auto b = resonance_residual({Parity::even, CaseKind::scalar, 4.0 / B}, E, m, l);
    // B -> 4/B flips the sign of (a, b), so the residuals agree up to sign.
    CHECK(std::abs(a.value[0] + b.value[0]) < 1e-12 * std::max(1.0, std::abs(a.value[0])));
    CHECK(std::abs(a.value[1] + b.value[1]) < 1e-12 * std::max(1.0, std::abs(a.value[1])));
  }
}

TEST_CASE("registered resonance residuals vanish on the explicit equations' roots",
          "[cases]") {
  // Poles of the library search are checked against the oracle equations and
  // the registry simultaneously.
  const auto check = [](const SpecialCaseId &id, auto &&oracle_fn) {
    for (const auto &p : find_resonances(id, m, l, default_resonance_region(m)).poles) {
      const auto reg = resonance_residual(id, p.energy(), m, l);
      double best = std::abs(reg.value[0]);
      if (reg.branches > 1)
        best = std::min(best, std::abs(reg.value[1]));
      CHECK(best < 1e-8);
      CHECK(oracle_fn(p.energy()) < 1e-8);
    }
  };
  check({Parity::even, CaseKind::equal_mixture, -1.0}, [](cplx E) {
    const auto r = oracle::even_equal_res(-1.0, E, m, l);
    return std::min(std::abs(r[0]), std::abs(r[1]));
  });
  check({Parity::even, CaseKind::pseudoscalar, 1.0},
        [](cplx E) { return std::abs(oracle::even_pseudo_res(1.0, E, m, l)); });
  check({Parity::odd, CaseKind::pseudoscalar, 1.0},
        [](cplx E) { return std::abs(oracle::odd_pseudo_res(1.0, E, m, l)); });
  check({Parity::even, CaseKind::scalar, 1.5}, [](cplx E) {
    const auto r = oracle::even_scalar_res(1.5, E, m, l);
    return std::min(std::abs(r[0]), std::abs(r[1]));
  });
}

TEST_CASE("encoded expectations", "[cases]") {
  SECTION("marker values") {
    const auto ee = expectations(Parity::even, CaseKind::equal_mixture, m, l);
    CHECK_THAT(ee.critical_values, Catch::Matchers::Approx(std::vector<double>{0.0, -0.25}));
    CHECK(ee.supercritical_everywhere);
    const auto es = expectations(Parity::even, CaseKind::scalar, m, l);
    CHECK(std::find_if(es.critical_values.begin(), es.critical_values.end(), [](double B) {
            return std::abs(B + 2 * (2 - std::sqrt(3.0))) < 1e-14;
          }) != es.critical_values.end());
    const auto eE = expectations(Parity::even, CaseKind::electrostatic, m, l);
    CHECK(std::find_if(eE.supercritical_values.begin(), eE.supercritical_values.end(),
                       [](double A) { return std::abs(A - 0.4721359549995796) < 1e-12; }) !=
          eE.supercritical_values.end());
    CHECK(std::find_if(eE.critical_values.begin(), eE.critical_values.end(),
                       [](double A) { return std::abs(A - 8.47213595499958) < 1e-12; }) !=
          eE.critical_values.end());
    const auto om = expectations(Parity::odd, CaseKind::magnetostatic, m, l);
    CHECK(om.critical_values.empty());
    CHECK(om.supercritical_values.empty());
    CHECK(om.symmetries.empty());
    CHECK(om.free_like);
    CHECK_FALSE(om.has_resonances);
  }
  SECTION("no real scalar markers below l = 1/m") {
    const auto es = expectations(Parity::even, CaseKind::scalar, m, 0.4);
    CHECK(es.critical_values == std::vector<double>{0.0});
  }
  SECTION("marker values pass the general detectors") {
    for (const auto &row : case_table()) {
      if (row.kind == CaseKind::magnetostatic)
        continue;
      const auto ex = expectations(row.parity, row.kind, m, l);
      for (double g : ex.critical_values)
        CHECK(check_critical(instantiate({row.parity, row.kind, g}, m, l)).residual < 1e-10);
      for (double g : ex.supercritical_values)
        CHECK(check_supercritical(instantiate({row.parity, row.kind, g}, m, l)).residual <
              1e-10);
    }
  }
  SECTION("scalar markers carry both threshold states") {
    const auto es = expectations(Parity::even, CaseKind::scalar, m, l);
    for (double B : es.critical_values) {
      const auto arr = instantiate({Parity::even, CaseKind::scalar, B}, m, l);
      CHECK(check_critical(arr).holds);
      CHECK(check_supercritical(arr).holds);
    }
  }
  SECTION("bound counts match the general solver") {
    for (const auto &row : case_table()) {
      const auto ex = expectations(row.parity, row.kind, m, l);
      for (int i = 0; i < 40; ++i) {
        const double g = -4.0 + 8.0 * (i + 0.37) / 40.0;
        if (std::abs(std::abs(g) - 2.0) < 1e-9)
          continue;
        const auto want = ex.bound_count(g);
        if (!want)
          continue;
        INFO(case_name(row.parity, row.kind) << " g=" << g);
        CHECK(static_cast<int>(
                  count_bound_states(instantiate({row.parity, row.kind, g}, m, l))) == *want);
      }
    }
  }
  SECTION("bound spectra respect the listed symmetries") {
    for (const auto &row : case_table()) {
      const auto ex = expectations(row.parity, row.kind, m, l);
      for (const auto &sym : ex.symmetries)
        for (double g : {-1.4, -0.3, 0.6, 1.7}) {
          auto a = energies(instantiate({row.parity, row.kind, g}, m, l));
          auto b = energies(instantiate({row.parity, row.kind, sym.map(g)}, m, l));
          if (sym.flips_energy) {
            for (double &e : b)
              e = -e;
            std::sort(b.begin(), b.end());
          }
          INFO(case_name(row.parity, row.kind) << " " << sym.name << " g=" << g);
          CHECK_THAT(a, Catch::Matchers::Approx(b).margin(1e-10));
        }
    }
  }
}

TEST_CASE("magnetostatic pairs behave as a free particle", "[cases]") {
  for (Parity p : {Parity::even, Parity::odd})
    for (double A1 : {-3.0, -0.5, 0.7, 2.0}) {
      const auto arr = instantiate({p, CaseKind::magnetostatic, A1}, m, l);
      for (double E : {2.2, 4.0, 9.0, -3.0}) {
        const auto M = transfer_matrix(arr, cplx(E, 0.0)).matrix;
        CHECK(std::abs(M.m12()) < 1e-14);
        CHECK(std::abs(M.m21()) < 1e-14);
        CHECK(std::abs(M.m11() - M.m22()) < 1e-14);
        CHECK(scattering_amplitudes(arr, E).T == Approx(1.0).epsilon(1e-14));
      }
      CHECK(find_bound_states(arr).bound_states.empty());
      CHECK(code_of([&] { find_resonances({p, CaseKind::magnetostatic, A1}, m, l, {}); }) ==
            ErrorCode::CaseHasNoResonances);
    }
}

TEST_CASE("separation asymptotics", "[cases]") {
  SECTION("even equal mixture, l -> 0+: one state of a doubled interaction") {
    for (double A0 : {-0.3, -0.8, -2.0}) {
      const double sep = 1e-4 / m, c = 2 * A0;
      const auto e = energies(instantiate({Parity::even, CaseKind::equal_mixture, A0}, m, sep));
      REQUIRE(e.size() == 1);
      CHECK(e[0] == Approx((1 - c * c) / (1 + c * c) * m).margin(20 * m * sep * m));
    }
  }
  SECTION("even equal mixture, l -> infinity: degenerate pair") {
    for (double A0 : {-0.6, -1.0, -1.5}) {
      const double sep = 8.0 / m, c = 2 * A0; // far enough to approach, close enough to resolve
      const auto e = energies(instantiate({Parity::even, CaseKind::equal_mixture, A0}, m, sep));
      REQUIRE(e.size() == 2);
      const double target = (1 - c * c / 4) / (1 + c * c / 4) * m;
      const double kap = std::sqrt(m * m - target * target);
      for (double x : e)
        CHECK(x == Approx(target).margin(10 * m * std::exp(-kap * sep)));
    }
  }
  SECTION("even electrostatic, l -> 0+: effective single strength 8A0/(4-A0^2)") {
    for (double A0 : {-1.2, -0.4, 0.5, 1.5}) {
      const double sep = 1e-4 / m;
      const double eff = 8 * A0 / (4 - A0 * A0);
      const auto pair = energies(instantiate({Parity::even, CaseKind::electrostatic, A0}, m, sep));
      const auto one =
          energies(single(strengths_to_lambda(PhysicalStrengths::electrostatic(eff)), m));
      REQUIRE(pair.size() == one.size());
      for (std::size_t i = 0; i < one.size(); ++i)
        CHECK(pair[i] == Approx(one[i]).margin(20 * m * sep * m));
    }
  }
  SECTION("even scalar, l -> 0+: one scalar interaction of strength 8B/(B^2+4)") {
    // The strength is read back from the composed matrix.
    for (double B : {-1.5, -0.8, -0.3}) {
      const auto arr = instantiate({Parity::even, CaseKind::scalar, B}, m, 1.0);
      const auto lim = single_point_limit(arr).matrix;
      const auto p = LambdaParams::make(0.0, lim.m11().real(), lim.m12().imag(),
                                        -lim.m21().imag(), lim.m22().real());
      const auto s = lambda_to_strengths(p);
      CHECK(s.A0() == Approx(0.0).margin(1e-12));
      CHECK(s.B() == Approx(8 * B / (B * B + 4)).epsilon(1e-12));
      const double sep = 1e-4 / m;
      const auto pair = energies(instantiate({Parity::even, CaseKind::scalar, B}, m, sep));
      const auto one = energies(single(strengths_to_lambda(PhysicalStrengths::scalar(s.B())), m));
      REQUIRE(pair.size() == one.size());
      for (std::size_t i = 0; i < one.size(); ++i)
        CHECK(pair[i] == Approx(one[i]).margin(20 * m * sep * m));
    }
  }
  SECTION("excited state appears just beyond the critical separation") {
    for (double A0 : {-0.5, -1.0}) {
      const double lcr = 1.0 / (m * std::abs(2 * A0));
      CHECK(energies(instantiate({Parity::even, CaseKind::equal_mixture, A0}, m, 1.05 * lcr))
                .size() == 2);
      CHECK(energies(instantiate({Parity::even, CaseKind::equal_mixture, A0}, m, 0.95 * lcr))
                .size() == 1);
    }
  }
}
