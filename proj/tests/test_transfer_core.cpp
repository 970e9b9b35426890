#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "pointscatter/transfer_core.hpp"

using namespace pointscatter;
using Catch::Approx;

namespace {

LambdaParams random_lambda(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-2.5, 2.5), ph(0.0, std::numbers::pi);
  for (;;) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.1)
      continue;
    return LambdaParams::make(ph(rng), a, b, c, (1.0 + b * c) / a);
  }
}

Arrangement random_arrangement(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> mass(0.5, 3.0), sep(0.0, 3.0);
  return Arrangement::make(random_lambda(rng), random_lambda(rng), mass(rng), sep(rng),
                           Parity::general);
}

oracle::M2 to_oracle(const CMat2 &m) { return {m.m11(), m.m12(), m.m21(), m.m22()}; }

double rel_dist(const CMat2 &a, const oracle::M2 &b) {
  return oracle::dist(to_oracle(a), b) / std::max(1.0, max_abs(a));
}

} // namespace

TEST_CASE("momentum follows the principal branch", "[transfer]") {
  const double m = 2.0;
  CHECK(momentum(3.0, m).real() == Approx(std::sqrt(5.0)));
  CHECK(momentum(3.0, m).imag() == 0.0);
  for (double E : {-1.999, -1.0, 0.0, 0.5, 1.999}) {
    const cplx k = momentum(E, m);
    CHECK(std::abs(k.real()) < 1e-14);
    CHECK(k.imag() == Approx(std::sqrt(m * m - E * E)).epsilon(1e-13));
  }
  // Below -m the principal roots give a negative real momentum.
  CHECK(momentum(-3.0, m).real() < 0.0);
}

TEST_CASE("plane-wave matrix", "[transfer]") {
  const double m = 1.5;
  const cplx E(2.5, 0.0), k = momentum(E, m);
  const CMat2 p0 = plane_wave_matrix(k, E, m, 0.0);
  CHECK(std::abs(p0.m11() - 1.0) < 1e-15);
  CHECK(std::abs(p0.m12() - 1.0) < 1e-15);
  CHECK(std::abs(p0.m21() - k / (E + m)) < 1e-15);
  CHECK(std::abs(p0.m22() + k / (E + m)) < 1e-15);
  for (double x : {-2.0, 0.3, 7.0}) {
    const CMat2 p = plane_wave_matrix(k, E, m, x);
    CHECK(std::abs(p.det() + 2.0 * k / (E + m)) < 1e-14);
    const CMat2 prod = p * plane_wave_inverse(k, E, m, x);
    CHECK(max_abs_diff(prod, CMat2::identity()) < 1e-14);
  }
  CHECK_THROWS_AS(plane_wave_matrix(0.0, m, m, 0.3), Error);
}

TEST_CASE("free arrangement propagates trivially", "[transfer]") {
  const auto arr = Arrangement::free(2.0, 1.0);
  for (cplx E : {cplx(3, 0), cplx(-5, 0), cplx(0.5, 0), cplx(4, -1)})
    CHECK(max_abs_diff(transfer_matrix(arr, E).matrix, CMat2::identity()) < 1e-14);
  CHECK_THROWS_AS(transfer_matrix(arr, cplx(2.0, 0.0)), Error);
  CHECK(max_abs_diff(critical_transfer(arr).matrix, CMat2::identity()) < 1e-15);
  CHECK(max_abs_diff(supercritical_transfer(arr).matrix, CMat2::identity()) < 1e-15);
}

TEST_CASE("transfer matrix agrees with the definition and its determinant law",
          "[transfer][property]") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_def = 0.0, worst_det = 0.0, worst_gamma = 0.0;
  for (int n = 0; n < 2000; ++n) {
    const auto arr = random_arrangement(rng);
    const double m = arr.mass();
    // Real energies on both continua and complex energies below the axis.
    cplx E;
    switch (n % 3) {
    case 0: E = m * (1.0 + 5.0 * u(rng)); break;
    case 1: E = -m * (1.0 + 5.0 * u(rng)); break;
    default: E = cplx(m * (12.0 * u(rng) - 6.0), -m * 2.0 * u(rng)); break;
    }
    const auto M = transfer_matrix(arr, E).matrix;
    const auto l1 = to_oracle(arr.lambda1().matrix()), l2 = to_oracle(arr.lambda2().matrix());
    worst_def = std::max(worst_def,
                         rel_dist(M, oracle::transfer(l1, l2, E, m, arr.separation())));
    const cplx expected = std::polar(1.0, 2.0 * arr.phase_sum());
    const double det_scale = std::abs(M.m11() * M.m22()) + std::abs(M.m12() * M.m21());
    worst_det = std::max(worst_det, std::abs(M.det() - expected) / std::max(1.0, det_scale));
    worst_gamma = std::max(
        worst_gamma, rel_dist(connection_matrix(arr, E),
                              oracle::connection(l1, l2, E, m, arr.separation())));
  }
  CHECK(worst_def < 1e-11);
  CHECK(worst_det < 1e-12);
  CHECK(worst_gamma < 1e-11);
}

TEST_CASE("connection matrix factorisations coincide", "[transfer]") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 200; ++n) {
    const auto arr = random_arrangement(rng);
    const double m = arr.mass();
    const cplx E(1.7 * m, 0.0), k = momentum(E, m);
    const CMat2 lhs = connection_matrix(arr, E);
    const CMat2 rhs = plane_wave_matrix(k, E, m, arr.x2()) * transfer_matrix(arr, E).matrix *
                      plane_wave_inverse(k, E, m, arr.x1());
    CHECK(max_abs_diff(lhs, rhs) < 1e-11 * std::max(1.0, max_abs(lhs)));
  }
}

TEST_CASE("connection matrix collapses to the composition law", "[transfer]") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    auto arr = random_arrangement(rng).with_separation(1e-8);
    const CMat2 composed = arr.lambda2().matrix() * arr.lambda1().matrix();
    const CMat2 gamma = connection_matrix(arr, cplx(2.0 * arr.mass(), 0.0));
    CHECK(max_abs_diff(gamma, composed) < 1e-6 * std::max(1.0, max_abs(composed)));
  }
}

TEST_CASE("single-point limits", "[transfer]") {
  SECTION("even pair of odd interactions is free") {
    const auto base = LambdaParams::make(0, 1.0 / 3.0, 0, 0, 3);
    const auto lim = single_point_limit(make_even_arrangement(base, 1, 1));
    CHECK(lim.parity == ParityClass::even);
    CHECK(max_abs_diff(lim.matrix, CMat2::identity()) < 1e-15);
  }
  SECTION("odd pair with a = d is a gauge phase") {
    const double phi = 0.4;
    const auto base = LambdaParams::make(phi, 1.0, 0.5, 0.0, 1.0);
    const auto lim = single_point_limit(make_odd_arrangement(base, 1, 1));
    CHECK(lim.parity == ParityClass::gauge_phase);
    const CMat2 expected = std::polar(1.0, 2 * phi) * CMat2::identity();
    CHECK(max_abs_diff(lim.matrix, expected) < 1e-15);
  }
  SECTION("odd pair with b = c = 0 squares the diagonal") {
    const double a = 0.6, phi = 1.1;
    const auto lim =
        single_point_limit(make_odd_arrangement(LambdaParams::make(phi, a, 0, 0, 1 / a), 1, 1));
    CHECK(lim.parity == ParityClass::odd);
    const CMat2 expected = std::polar(1.0, 2 * phi) * CMat2(a * a, 0.0, 0.0, 1 / (a * a));
    CHECK(max_abs_diff(lim.matrix, expected) < 1e-14);
  }
  SECTION("closed forms equal the short-separation connection matrix") {
    std::mt19937_64 rng(17);
    for (int n = 0; n < 500; ++n) {
      const auto base = random_lambda(rng);
      for (const auto &arr : {make_even_arrangement(base, 1.0, 1e-9),
                              make_odd_arrangement(base, 1.0, 1e-9)}) {
        const auto lim = single_point_limit(arr);
        const CMat2 gamma = connection_matrix(arr, cplx(1.5, 0.0));
        CHECK(max_abs_diff(lim.matrix, gamma) < 1e-6 * std::max(1.0, max_abs(gamma)));
      }
      CHECK(single_point_limit(make_even_arrangement(base, 1.0, 1.0)).parity ==
            ParityClass::even);
    }
  }
  SECTION("general arrangements have no single-point class") {
    const auto l1 = LambdaParams::make(0, 1, 0, 2, 1);
    CHECK_THROWS_AS(single_point_limit(Arrangement::make(l1, l1, 1, 1, Parity::general)),
                    Error);
  }
}

TEST_CASE("threshold matrices are limits of the rescaled transfer matrix", "[transfer]") {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 50; ++n) {
    const auto arr = random_arrangement(rng);
    const double m = arr.mass();
    const double eps = 1e-6; // truncation ~eps, cancellation ~1e-16/eps
    {
      const cplx E = m * (1.0 + eps), k = momentum(E, m);
      const CMat2 R(m / k, 0.5, -m / k, 0.5);
      const CMat2 limit = R.inverse() * transfer_matrix(arr, E).matrix * R;
      const CMat2 crit = critical_transfer(arr).matrix;
      CHECK(max_abs_diff(limit, crit) < 1e-3 * std::max(1.0, max_abs(crit)));
    }
    {
      const cplx E = -m * (1.0 + eps), k = momentum(E, m), r = k / (E + m);
      const CMat2 R(0.5, 0.5 / r, 0.5, -0.5 / r);
      const CMat2 limit = R.inverse() * transfer_matrix(arr, E).matrix * R;
      const CMat2 super = supercritical_transfer(arr).matrix;
      CHECK(max_abs_diff(limit, super) < 1e-3 * std::max(1.0, max_abs(super)));
    }
  }
}

TEST_CASE("even equal mixture threshold conditions", "[transfer]") {
  const double m = 2.0, l = 1.0;
  for (double c : {-2.0, -0.5, -0.3, 0.0, 0.4}) {
    const auto arr = make_even_arrangement(LambdaParams::make(0, 1, 0, c, 1), m, l);
    const bool expected = c == 0.0 || std::abs(1.0 + c * m * l) < 1e-15;
    CHECK((std::abs(critical_transfer(arr).m12()) < 1e-12) == expected);
    CHECK(std::abs(supercritical_transfer(arr).m12()) < 1e-12);
  }
}

TEST_CASE("phase shifts only rescale M22", "[transfer][property]") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int n = 0; n < 200; ++n) {
    const auto arr = random_arrangement(rng);
    const double s1 = u(rng), s2 = u(rng);
    const auto shift = [](const LambdaParams &p, double s) {
      return LambdaParams::make(p.phi() + s, p.a(), p.b(), p.c(), p.d());
    };
    const auto moved = Arrangement::make(shift(arr.lambda1(), s1), shift(arr.lambda2(), s2),
                                         arr.mass(), arr.separation(), Parity::general);
    const cplx E(0.3 * arr.mass(), -0.2 * arr.mass());
    const cplx r = transfer_matrix(moved, E).m22() / transfer_matrix(arr, E).m22();
    CHECK(std::abs(r - std::polar(1.0, s1 + s2)) < 1e-12);
  }
}
