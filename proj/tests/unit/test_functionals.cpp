#include <doctest.h>

#include <cmath>
#include <random>

#include "compacton/functionals.hpp"
#include "support.hpp"

using namespace compacton;

namespace {
const Exponents E = Exponents::make(0.1, 0.2, 4);
}

TEST_SUITE("functionals") {
  TEST_CASE("energy by direct arithmetic") {
    CHECK(energy(IntegralBundle{}, 1.0, E) == 0.0);
    const Exponents e = Exponents::make(0.3, 0.6, 3);
    CHECK(energy(IntegralBundle::make(2.0, 0.0, 0.0, 1.6), 1.0, e) == doctest::Approx(0.0));
    CHECK(energy(IntegralBundle::make(1.0, 0.0, 1.0, 1.0), 1.0, E) ==
          doctest::Approx(0.5 - 1.0 / 1.2 + 1.0 / 1.1).epsilon(1e-15));
  }

  TEST_CASE("Pohozaev functional by direct arithmetic and its energy identity") {
    CHECK(pohozaev(IntegralBundle{}, 1.0, E) == 0.0);
    CHECK(pohozaev(IntegralBundle::make(1.0, 0.0, 0.0, 1.2), 1.0, E) == doctest::Approx(-0.75).epsilon(1e-15));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lam(0.1, 10.0);
    for (int k = 0; k < 200; ++k) {
      const IntegralBundle b = testing::random_bundle(rng);
      const double l = lam(rng);
      const double lhs = energy(b, l, E) - pohozaev(b, l, E);
      const double scale = b.I2 / 2 + l * b.S_p / 1.2 + b.S_q / 1.1;
      CHECK(std::abs(lhs - b.I_x / E.N) <= 1e-14 * scale);
    }
  }

  TEST_CASE("fiber derivatives") {
    const IntegralBundle b = IntegralBundle::make(0.7, 0.3, 0.4, 0.9);
    CHECK(fiber_phi1(b, (b.I2 + b.S_q) / b.S_p) == doctest::Approx(0.0));
    CHECK(fiber_phi2(IntegralBundle::make(1, 0, 1, 1), 1.0, E) == doctest::Approx(0.9).epsilon(1e-15));

    const GridPtr g = build_grid(Geometry::make(1, 1, 4), 8, 16);
    std::mt19937_64 rng(5);
    const Field u = testing::random_smooth(g, rng);
    const IntegralBundle bu = integrals(u, E.q, E.p);
    const double l = 2.0, h = 1e-6;
    for (double t : {0.3, 1.0, 2.0}) {
      const double fd = (energy(integrals((t + h) * u, E.q, E.p), l, E) -
                         energy(integrals((t - h) * u, E.q, E.p), l, E)) / (2 * h);
      const double g_t = std::pow(t, 1 - E.q) * bu.I2 - l * std::pow(t, E.p - E.q) * bu.S_p + bu.S_q;
      const double closed = std::pow(t, E.q) * g_t;
      CHECK(testing::rel(fd, closed) <= 1e-5);
      CHECK(testing::rel(t * closed, fiber_phi1(scale_bundle(bu, t, E), l)) <= 1e-12);
    }
  }

  TEST_CASE("first variation: zero field, pairing and directional derivatives") {
    const GridPtr g = build_grid(Geometry::make(1, 1, 4), 8, 16);
    CHECK(first_variation(Field(g), 1.7, E).max_abs() == 0.0);

    std::mt19937_64 rng(21);
    for (int k = 0; k < 50; ++k) {
      const Field u = testing::random_smooth(g, rng);
      const double l = 1.0 + k * 0.05;
      const double pairing = weighted_dot(first_variation(u, l, E), u);
      CHECK(testing::rel(pairing, fiber_phi1(integrals(u, E.q, E.p), l)) <= 1e-8);
    }
    const Field u = testing::random_smooth(g, rng);
    const Field v = testing::random_smooth(g, rng);
    const double eps = 1e-5, l = 1.9;
    const double fd = (energy(integrals(u + eps * v, E.q, E.p), l, E) -
                       energy(integrals(u - eps * v, E.q, E.p), l, E)) / (2 * eps);
    CHECK(testing::rel(fd, weighted_dot(first_variation(u, l, E), v)) <= 1e-4);
  }

  TEST_CASE("residual norm ignores the Dirichlet column") {
    const GridPtr g = build_grid(Geometry::make(1, 1, 4), 4, 4);
    Field r(g);
    r(1, 2) = -3.0;
    CHECK(residual_norm(r) == 3.0);
  }
}
