#include "compacton/pohozaev.hpp"

#include <cmath>
#include <limits>

#include "compacton/error.hpp"
#include "compacton/functionals.hpp"

namespace compacton {

double boundary_flux(const Field& u) {
  const Grid& g = u.grid();
  const int nr = g.nr();
  const double inv = 1.0 / (2.0 * g.hr());
  double sum = 0.0;
  for (int i = 0; i < g.nz(); ++i) {
    const double ur = (3.0 * u(i, nr) - 4.0 * u(i, nr - 1) + u(i, nr - 2)) * inv;
    sum += ur * ur;
  }
  return -g.omega() * std::pow(g.R(), g.N()) * g.hz() * sum / (2.0 * g.N());
}

PohozaevReport verify(const Field& u, double lambda, const Exponents& e, double residual_limit) {
  PohozaevReport r;
  const IntegralBundle b = integrals(u, e.q, e.p);
  r.P_volume = pohozaev(b, lambda, e);
  r.flux = boundary_flux(u);
  r.residual = std::abs(r.P_volume - r.flux);
  r.scale = b.I2;
  r.solution_residual = residual_norm(first_variation(u, lambda, e));
  r.meaningful = r.solution_residual <= residual_limit;
  return r;
}

double fit_order(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("order fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

PohozaevReport verify_refinement(const std::vector<Field>& levels, double lambda,
                                 const Exponents& e, double residual_limit) {
  if (levels.size() < 2) throw InvalidArgument("refinement needs at least two levels");
  PohozaevReport out;
  for (const Field& u : levels) {
    const PohozaevReport r = verify(u, lambda, e, residual_limit);
    out.h.push_back(u.grid().hr());
    out.residuals.push_back(r.residual);
    out = PohozaevReport{r.P_volume, r.flux, r.residual, r.scale, r.solution_residual,
                         r.meaningful, out.h, out.residuals, 0.0};
  }
  bool positive = true;
  for (double v : out.residuals) positive = positive && v > 0.0;
  out.refinement_order = positive ? fit_order(out.h, out.residuals) : std::numeric_limits<double>::infinity();
  return out;
}

nlohmann::json to_json(const PohozaevReport& r) {
  nlohmann::json j = {{"P_volume", r.P_volume},
                      {"flux", r.flux},
                      {"residual", r.residual},
                      {"scale", r.scale},
                      {"solution_residual", r.solution_residual},
                      {"meaningful", r.meaningful}};
  if (!r.h.empty()) {
    j["refinement"] = {{"h", r.h}, {"residuals", r.residuals}, {"order", r.refinement_order}};
  }
  return j;
}

}  // namespace compacton
