#include <doctest.h>

#include <cmath>
#include <numbers>

#include "compacton/error.hpp"
#include "compacton/mesh.hpp"
#include "support.hpp"

using namespace compacton;
using std::numbers::pi;

namespace {
GridPtr cyl(double T, double R, int N, int nz, int nr) {
  return build_grid(Geometry::make(T, R, N), nz, nr);
}
}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("exponent and geometry invariants") {
    CHECK_THROWS_AS(Exponents::make(0.2, 0.1, 4), InvalidArgument);
    CHECK_THROWS_AS(Exponents::make(0.1, 1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(Exponents::make(0.1, 0.2, 2), InvalidArgument);
    const Exponents e = Exponents::make(0.1, 0.2, 4);
    CHECK(e.two_star() == 4.0);
    CHECK(e.in_subcritical_set() == (e.d_star() > 0.0));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(unit_sphere_area(4) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
    CHECK_THROWS_AS(Geometry::make(0.0, 1.0, 3), InvalidArgument);
    CHECK_THROWS_AS(Geometry::make(1.0, -1.0, 3), InvalidArgument);
  }

  TEST_CASE("grid spacing and nonnegative weights") {
    const GridPtr g = cyl(0.5, 2.0, 4, 8, 8);
    CHECK(g->hz() == 0.125);
    CHECK(g->hr() == 0.25);
    for (double w : g->radial_weights()) CHECK(w >= 0.0);
    CHECK_THROWS_AS(cyl(1, 1, 3, 7, 8), InvalidArgument);
  }

  TEST_CASE("integrating one gives the cylinder volume") {
    Field one(cyl(1, 1, 3, 64, 64), 1.0);
    for (int i = 0; i < 64; ++i) one(i, 64) = 1.0;
    CHECK(std::abs(integrate(one) - 8.0 * pi / 3.0) <= 1e-10);

    const GridPtr g4 = cyl(0.7, 1.3, 4, 10, 13);
    Field one4(g4, 1.0);
    for (int i = 0; i < g4->nz(); ++i) one4(i, g4->nr()) = 1.0;
    const double exact = 1.4 * 2.0 * pi * pi * std::pow(1.3, 4) / 4.0;
    CHECK(testing::rel(integrate(one4), exact) <= 1e-12);
  }

  TEST_CASE("integrating r^2 converges to the dense oracle") {
    const double oracle =
        2.0 * 4.0 * pi * testing::midpoint([](double r) { return r * r * r * r; }, 0.0, 1.0, 1000000);
    CHECK(oracle == doctest::Approx(8.0 * pi / 5.0).epsilon(1e-10));
    double prev = 0.0;
    for (int nr : {16, 32, 64}) {
      const GridPtr g = cyl(1, 1, 3, 8, nr);
      Field f(g);
      for (int i = 0; i < g->nz(); ++i)
        for (int j = 0; j <= nr; ++j) f(i, j) = g->r(j) * g->r(j);
      const double err = std::abs(integrate(f) - oracle);
      CHECK(err <= 4.0 * g->hr() * g->hr());
      if (prev > 0.0 && err > 1e-13) CHECK(err < prev);
      prev = err;
    }
  }

  TEST_CASE("d_z: constants, wraparound and second-order accuracy") {
    const GridPtr g = cyl(1, 1, 3, 16, 8);
    CHECK(d_z(Field(g, 3.0)).max_abs() == 0.0);

    Field spike(g);
    spike(1, 2) = 1.0;
    CHECK(d_z(spike)(0, 2) == doctest::Approx(1.0 / (2.0 * g->hz())));
    spike = Field(g);
    spike(g->nz() - 1, 2) = 1.0;
    CHECK(d_z(spike)(0, 2) == doctest::Approx(-1.0 / (2.0 * g->hz())));

    double prev = 0.0;
    for (int nz : {16, 32, 64}) {
      const GridPtr h = cyl(1, 1, 3, nz, 8);
      const Field u = Field::sample(h, [](double z, double) { return std::sin(pi * z); });
      const Field du = d_z(u);
      double err = 0.0;
      for (int i = 0; i < nz; ++i) err = std::max(err, std::abs(du(i, 3) - pi * std::cos(pi * h->z(i))));
      if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
      prev = err;
    }
  }

  TEST_CASE("d_r: constants, quadratics and the axis") {
    const GridPtr g = cyl(1, 2, 3, 4, 16);
    Field c(g, 1.0);
    for (int i = 0; i < 4; ++i) c(i, 16) = 1.0;
    CHECK(d_r(c).max_abs() <= 1e-12);

    const Field u = Field::sample(g, [](double, double r) { return 4.0 - r * r; });
    const Field du = d_r(u);
    for (int j = 0; j <= 16; ++j) CHECK(du(2, j) == doctest::Approx(-2.0 * g->r(j)).epsilon(1e-12));

    double prev = 1.0;
    for (int nr : {8, 16, 32, 64}) {
      const GridPtr h = cyl(1, 1, 3, 4, nr);
      const double axis = std::abs(d_r(Field::sample(h, [](double, double r) { return std::cos(2.0 * r); }))(0, 0));
      CHECK(axis < prev);
      prev = axis;
    }
    CHECK(prev < 1e-3);
  }

  TEST_CASE("integrals: zero field and z-constant fields") {
    const GridPtr g = cyl(1, 1, 4, 8, 12);
    const IntegralBundle z = integrals(Field(g), 0.1, 0.2);
    CHECK(z.I_x == 0.0);
    CHECK(z.I_z == 0.0);
    CHECK(z.I2 == 0.0);
    CHECK(z.S_q == 0.0);
    CHECK(z.S_p == 0.0);
    const Field u = Field::sample(g, [](double, double r) { return 1.0 - r; });
    CHECK(integrals(u, 0.1, 0.2).I_z == 0.0);
  }

  TEST_CASE("integrals match a separable dense-quadrature oracle") {
    const double q = 0.1, p = 0.2;
    const int n = 200000;
    auto zint = [&](double power) {
      return testing::midpoint([&](double z) { return std::pow(1.0 + std::cos(pi * z), power); }, -1.0, 1.0, n);
    };
    auto rint = [&](double power) {
      return 4.0 * pi * testing::midpoint([&](double r) { return std::pow(1.0 - r, power) * r * r; }, 0.0, 1.0, n);
    };
    const double Ix = zint(2.0) * 4.0 * pi * testing::midpoint([](double r) { return r * r; }, 0.0, 1.0, n);
    const double Iz = pi * pi * testing::midpoint([](double z) { return std::pow(std::sin(pi * z), 2); }, -1.0, 1.0, n) * rint(2.0);
    const double Sq = zint(q + 1.0) * rint(q + 1.0);
    const double Sp = zint(p + 1.0) * rint(p + 1.0);

    const GridPtr g = cyl(1, 1, 3, 128, 128);
    const Field u = Field::sample(g, [](double z, double r) { return (1.0 - r) * (1.0 + std::cos(pi * z)); });
    const IntegralBundle b = integrals(u, q, p);
    CHECK(testing::rel(b.I_x, Ix) <= 1e-3);
    CHECK(testing::rel(b.I_z, Iz) <= 1e-3);
    CHECK(testing::rel(b.S_q, Sq) <= 1e-3);
    CHECK(testing::rel(b.S_p, Sp) <= 1e-3);
    CHECK(b.I2 == b.I_x + b.I_z);
  }

  TEST_CASE("scaling and z-shift behave as expected") {
    const GridPtr g = cyl(1, 1, 4, 16, 16);
    std::mt19937_64 rng(3);
    const Field u = testing::random_smooth(g, rng);
    const double q = 0.1, p = 0.2, s = 2.5;
    const IntegralBundle b = integrals(u, q, p);
    const IntegralBundle bs = integrals(s * u, q, p);
    CHECK(testing::rel(bs.I_x, s * s * b.I_x) <= 1e-13);
    CHECK(testing::rel(bs.I_z, s * s * b.I_z) <= 1e-13);
    CHECK(testing::rel(bs.S_q, std::pow(s, q + 1) * b.S_q) <= 1e-13);
    CHECK(testing::rel(bs.S_p, std::pow(s, p + 1) * b.S_p) <= 1e-13);

    const Field shifted = u.shifted_z(5);
    CHECK(testing::rel(integrals(shifted, q, p).I_z, b.I_z) <= 1e-13);
    const Field a = d_z(shifted);
    const Field c = d_z(u).shifted_z(5);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.values()[k] == c.values()[k]);
  }

  TEST_CASE("fields keep the Dirichlet column") {
    const GridPtr g = cyl(1, 1, 4, 8, 8);
    Field u(g, 2.0);
    CHECK(u.is_valid());
    u(3, 8) = 1.0;
    CHECK_FALSE(u.is_valid());
    std::mt19937_64 rng(1);
    Field z = testing::random_smooth(g, rng);
    z.make_z_constant();
    CHECK(d_z(z).max_abs() == 0.0);
  }
}
