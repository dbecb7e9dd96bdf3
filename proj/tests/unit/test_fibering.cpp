#include <doctest.h>

#include <cmath>
#include <random>

#include "compacton/error.hpp"
#include "compacton/fibering.hpp"
#include "compacton/radial_ode.hpp"
#include "compacton/rayleigh.hpp"
#include "support.hpp"

using namespace compacton;

namespace {
const Exponents E = Exponents::make(0.1, 0.2, 4);

/// Sign changes of g on a dense log grid.
std::vector<double> scan_roots(const IntegralBundle& b, double l) {
  std::vector<double> out;
  const int n = 400000;
  const double step = std::log(1e9) / (n - 1);
  double tp = 1e-6, gp = nehari_g(b, l, tp, E);
  for (int k = 1; k < n; ++k) {
    const double t = 1e-6 * std::exp(step * k);
    const double gv = nehari_g(b, l, t, E);
    if ((gv > 0) != (gp > 0)) out.push_back(std::sqrt(t * tp));
    tp = t;
    gp = gv;
  }
  return out;
}
}  // namespace

TEST_SUITE("fibering") {
  TEST_CASE("Nehari roots of the reference bundle") {
    const IntegralBundle b = IntegralBundle::make(1, 0, 1, 1);
    const NehariRoots none = nehari_roots(b, 1.0, E);
    CHECK_FALSE(none.t_star.has_value());
    CHECK_FALSE(none.t_tilde.has_value());
    CHECK(scan_roots(b, 1.0).empty());
    CHECK(none.lambda_min_ray == doctest::Approx(1.41742).epsilon(1e-5));
    CHECK(none.t1 == doctest::Approx(0.099213).epsilon(1e-5));

    const NehariRoots dbl = nehari_roots(b, none.lambda_min_ray * (1 + 1e-12), E);
    REQUIRE(dbl.t_tilde.has_value());
    CHECK(*dbl.t_tilde == doctest::Approx(0.099213).epsilon(1e-3));

    const NehariRoots two = nehari_roots(b, 2.0, E);
    REQUIRE(two.t_star.has_value());
    REQUIRE(two.t_tilde.has_value());
    const auto oracle = scan_roots(b, 2.0);
    REQUIRE(oracle.size() == 2);
    CHECK(testing::rel(*two.t_star, oracle[0]) <= 1e-4);
    CHECK(testing::rel(*two.t_tilde, oracle[1]) <= 1e-4);
    for (double t : {*two.t_star, *two.t_tilde}) {
      CHECK(std::abs(nehari_g(b, 2.0, t, E)) <= 1e-12 * (b.I2 + b.S_q));
      CHECK(quotients(b, t, E).R1 == doctest::Approx(2.0).epsilon(1e-10));
    }
  }

  TEST_CASE("the larger root grows with lambda") {
    const IntegralBundle b = IntegralBundle::make(1, 0, 1, 1);
    double prev = 0.0;
    for (double l : {2.0, 5.0, 10.0}) {
      const double t = *nehari_roots(b, l, E).t_tilde;
      CHECK(t > prev);
      const auto oracle = scan_roots(b, l);
      CHECK(testing::rel(t, oracle.back()) <= 1e-4);
      prev = t;
    }
  }

  TEST_CASE("projection onto the constrained Nehari set") {
    const GridPtr g = build_grid(Geometry::make(1, 1, 4), 8, 12);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 100; ++k) {
      const Field v = testing::random_smooth(g, rng);
      const IntegralBundle b = integrals(v, E.q, E.p);
      const FiberDiagnostics d = scale_factors(b, E);

      const double below = 0.9 * d.lambda1P_u;
      CHECK_FALSE(project_to_M(v, below, E).has_value());
      const NehariRoots r = nehari_roots(b, below, E);
      for (auto t : {r.t_star, r.t_tilde})
        if (t) CHECK(pohozaev(scale_bundle(b, *t, E), below, E) > 0.0);

      const auto at = project_to_M(v, d.lambda1P_u * (1 + 1e-10), E);
      if (at) {
        const IntegralBundle ba = integrals(*at, E.q, E.p);
        CHECK(std::abs(pohozaev(ba, d.lambda1P_u, E)) <= 1e-6 * (ba.I2 + ba.S_q));
      }

      const auto above = project_to_M(v, 2.0 * d.lambda1P_u, E);
      REQUIRE(above.has_value());
      const IntegralBundle bb = integrals(*above, E.q, E.p);
      CHECK(pohozaev(bb, 2.0 * d.lambda1P_u, E) < 0.0);
      CHECK(std::abs(fiber_phi1(bb, 2.0 * d.lambda1P_u)) <= 1e-10 * (bb.I2 + bb.S_q));
    }
  }

  TEST_CASE("constrained minimisation never exceeds a projected seed") {
    const GridPtr g = build_grid(Geometry::make(1, 1, 4), 8, 16);
    const std::vector<Field> seeds = default_seeds(g);
    for (double l : {1.96, 2.1, 2.5}) {
      const SolveResult r = minimize_constrained(l, g, E, seeds);
      CHECK(r.feasible);
      CHECK(r.P <= SolverOptions{}.tol_P * (r.bundle.I2 + r.bundle.S_q));
      for (double s : r.seed_energies)
        if (std::isfinite(s)) CHECK(r.phi <= s + 1e-12 * std::abs(s));
      CHECK(r.phi2 > 0.0);
    }
    CHECK_THROWS_AS(minimize_constrained(1.0, g, E, seeds), Infeasible);
  }

  TEST_CASE("solver energy at the ball threshold against the embedded compacton") {
    const GridPtr g = build_grid(Geometry::make(1, 1, 4), 8, 128);
    const ShootResult base = find_compacton(4, E.q, E.p);
    const double l = lambda_star_ball(base, 1.0);
    const Field emb = embed(base, 1.0, g);
    const double phi_emb = energy(integrals(emb, E.q, E.p), l, E);
    const SolveResult r = minimize_constrained(l, g, E, {emb});
    // The discrete ground state at this lambda is not the compacton: it has
    // strictly lower energy and a nonzero wall flux.
    CHECK(r.phi <= phi_emb);
    MESSAGE("embedded compacton Phi = " << phi_emb << ", solver Phi = " << r.phi
                                        << ", relative gap = " << (phi_emb - r.phi) / phi_emb);
  }
}
