#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "compacton/kernels.hpp"

using namespace compacton::kernels;

TEST_SUITE("kernels") {
  TEST_CASE("avx2 variants agree with the scalar reference") {
    const KernelTable* wide = avx2_table();
    if (!wide) {
      MESSAGE("AVX2 variant unavailable on this host");
      return;
    }
    const KernelTable& ref = scalar_table();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (const auto& [nz, nr] : {std::pair{4, 4}, {6, 5}, {8, 17}, {10, 31}, {16, 64}}) {
      CAPTURE(nz);
      CAPTURE(nr);
      const Layout l{nz, nr};
      const std::size_t n = static_cast<std::size_t>(nz) * l.stride();
      std::vector<double> u(n), v(n), w(nr + 1), m(nr), outer(nr), inner(nr);
      for (auto& x : u) x = dist(rng);
      for (auto& x : v) x = dist(rng);
      for (int i = 0; i < nz; ++i) u[i * l.stride() + nr] = 0.0;
      for (auto& x : w) x = 1.0 + dist(rng);
      for (auto& x : m) x = 1.0 + dist(rng);
      for (auto& x : outer) x = 2.0 + dist(rng);
      for (auto& x : inner) x = 2.0 + dist(rng);
      inner[0] = 0.0;

      std::vector<double> az(n, 7.0), ar(n, 7.0), bz(n, -7.0), br(n, -7.0);
      ref.stiffness_parts(l, u.data(), outer.data(), inner.data(), 3.5, az.data(), ar.data());
      wide->stiffness_parts(l, u.data(), outer.data(), inner.data(), 3.5, bz.data(), br.data());
      CHECK(az == bz);
      CHECK(ar == br);

      double sz_a, sr_a, sz_b, sr_b;
      ref.gradient_energy(l, u.data(), w.data(), m.data(), &sz_a, &sr_a);
      wide->gradient_energy(l, u.data(), w.data(), m.data(), &sz_b, &sr_b);
      CHECK(sz_b == doctest::Approx(sz_a).epsilon(1e-13));
      CHECK(sr_b == doctest::Approx(sr_a).epsilon(1e-13));

      const double da = ref.weighted_dot(l, u.data(), v.data(), w.data());
      const double db = wide->weighted_dot(l, u.data(), v.data(), w.data());
      double mag = 0.0;
      for (std::size_t k = 0; k < n; ++k) mag += std::abs(u[k] * v[k] * w[k % l.stride()]);
      CHECK(std::abs(da - db) <= 1e-14 * mag);
    }
  }

  TEST_CASE("selection switches the active table") {
    const Isa before = active().isa;
    select(Isa::scalar);
    CHECK(active().isa == Isa::scalar);
    CHECK(active().name == scalar_table().name);
    select(before);
    CHECK(active().isa == before);
  }
}
