#include "compacton/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace compacton {

double energy(const IntegralBundle& b, double lambda, const Exponents& e) {
  return 0.5 * b.I2 - lambda * b.S_p / (e.p + 1.0) + b.S_q / (e.q + 1.0);
}

double pohozaev(const IntegralBundle& b, double lambda, const Exponents& e) {
  return b.I_x / e.two_star() + 0.5 * b.I_z + b.S_q / (e.q + 1.0) - lambda * b.S_p / (e.p + 1.0);
}

double fiber_phi1(const IntegralBundle& b, double lambda) { return b.I2 - lambda * b.S_p + b.S_q; }

double fiber_phi2(const IntegralBundle& b, double lambda, const Exponents& e) {
  return b.I2 - lambda * e.p * b.S_p + e.q * b.S_q;
}

IntegralBundle scale_bundle(const IntegralBundle& b, double t, const Exponents& e) {
  const double t2 = t * t;
  return IntegralBundle::make(t2 * b.I_x, t2 * b.I_z, std::pow(t, e.q + 1.0) * b.S_q,
                              std::pow(t, e.p + 1.0) * b.S_p);
}

Field first_variation(const Field& u, double lambda, const Exponents& e) {
  Field out_z(u.grid_ptr());
  Field out_r(u.grid_ptr());
  stiffness_parts(u, out_z, out_r);
  const Grid& g = u.grid();
  for (int i = 0; i < g.nz(); ++i) {
    for (int j = 0; j < g.nr(); ++j) {
      const double v = u(i, j);
      const double a = std::abs(v);
      double f = out_z(i, j) + out_r(i, j);
      if (a > 0.0) {
        const double mag = std::pow(a, e.q) - lambda * std::pow(a, e.p);
        f += v > 0.0 ? mag : -mag;
      }
      out_z(i, j) = f;
    }
    out_z(i, g.nr()) = 0.0;
  }
  return out_z;
}

double residual_norm(const Field& residual) {
  const Grid& g = residual.grid();
  double m = 0.0;
  for (int i = 0; i < g.nz(); ++i)
    for (int j = 0; j < g.nr(); ++j) m = std::max(m, std::abs(residual(i, j)));
  return m;
}

}  // namespace compacton
