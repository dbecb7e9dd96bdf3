#include <doctest.h>

#include <cmath>
#include <random>

#include "compacton/fibering.hpp"
#include "compacton/functionals.hpp"
#include "compacton/pohozaev.hpp"
#include "compacton/radial_ode.hpp"
#include "compacton/rayleigh.hpp"
#include "support.hpp"

using namespace compacton;

TEST_SUITE("pohozaev") {
  TEST_CASE("boundary flux: zero, analytic and compactly supported fields") {
    const GridPtr g = build_grid(Geometry::make(1, 1.5, 3), 8, 64);
    CHECK(boundary_flux(Field(g)) == 0.0);

    const double R = 1.5;
    const Field u = Field::sample(g, [&](double, double r) { return R * R - r * r; });
    const double exact = -(1.0 / 6.0) * 4 * M_PI * std::pow(R, 3) * 2.0 * 4 * R * R;
    CHECK(testing::rel(boundary_flux(u), exact) <= 1e-10);
    CHECK(boundary_flux(u) < 0.0);

    const Exponents e = Exponents::make(0.5, 0.75, 3);
    const ShootResult base = find_compacton(3, e.q, e.p);
    const Field c = embed(base, R - 4 * g->hr(), g);
    const double scale = integrals(c, e.q, e.p).I2;
    CHECK(std::abs(boundary_flux(c)) <= 1e-10 * scale);
  }

  TEST_CASE("embedded compacton satisfies the identity with both sides near zero") {
    const Exponents e = Exponents::make(0.5, 0.75, 3);
    const ShootResult base = find_compacton(3, e.q, e.p);
    const GridPtr g = build_grid(Geometry::make(1, 1, 3), 8, 128);
    const double Rt = 0.8;
    const Field u = embed(base, Rt, g);
    const PohozaevReport r = verify(u, rescale(base, Rt).lambda_R, e);
    CHECK(r.meaningful);
    CHECK(std::abs(r.P_volume) <= 1e-3 * r.scale);
    CHECK(std::abs(r.flux) <= 1e-10 * r.scale);
    CHECK(r.residual <= 1e-3 * r.scale);
  }

  TEST_CASE("non-compact solution above the zero-energy threshold") {
    const Exponents e = Exponents::make(0.1, 0.2, 4);
    std::vector<double> residuals, hs;
    for (int nr : {16, 32, 64}) {
      const GridPtr g = build_grid(Geometry::make(1, 1, 4), 8, nr);
      const SolveResult s = minimize_constrained(2.3, g, e, default_seeds(g));
      const PohozaevReport r = verify(s.u, 2.3, e);
      CHECK(r.meaningful);
      CHECK(r.P_volume < 0.0);
      CHECK(r.flux < 0.0);
      residuals.push_back(r.residual);
      hs.push_back(g->hr());
    }
    CHECK(residuals[2] < residuals[1]);
    CHECK(residuals[1] < residuals[0]);
    CHECK(fit_order(hs, residuals) >= 1.0);
  }

  TEST_CASE("random fields are flagged") {
    const Exponents e = Exponents::make(0.1, 0.2, 4);
    const GridPtr g = build_grid(Geometry::make(1, 1, 4), 8, 16);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    Field u(g);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 16; ++j) u(i, j) = d(rng);
    const PohozaevReport r = verify(u, 2.0, e);
    CHECK_FALSE(r.meaningful);
    CHECK(r.solution_residual > 1e-2);
  }

  TEST_CASE("order fit recovers a power law") {
    const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> y;
    for (double x : h) y.push_back(3.0 * std::pow(x, 1.7));
    CHECK(fit_order(h, y) == doctest::Approx(1.7).epsilon(1e-12));
  }
}
