#pragma once

#include <vector>

#include <json.hpp>

#include "compacton/mesh.hpp"

namespace compacton {

/// -(1/(2N)) omega R^N sum_i hz u_r(z_i, R)^2, with u_r from a one-sided
/// second-order difference at the wall.
double boundary_flux(const Field& u);

struct PohozaevReport {
  double P_volume = 0.0;
  double flux = 0.0;
  double residual = 0.0;         ///< |P_volume - flux|
  double scale = 0.0;            ///< I2 of the field
  double solution_residual = 0.0;
  bool meaningful = true;        ///< false when the field is far from a solution
  std::vector<double> h;         ///< refinement mode: radial spacing per level
  std::vector<double> residuals; ///< refinement mode: residual per level
  double refinement_order = 0.0;
};

/// Compares P with the boundary flux; the identity only holds for solutions,
/// so the report is marked not meaningful when the first-variation sup norm
/// exceeds residual_limit.
PohozaevReport verify(const Field& u, double lambda, const Exponents& e,
                      double residual_limit = 1e-2);

/// Least-squares slope of log(y) against log(x).
double fit_order(const std::vector<double>& x, const std::vector<double>& y);

/// verify() on each level and a fitted convergence order of the residual.
PohozaevReport verify_refinement(const std::vector<Field>& levels, double lambda,
                                 const Exponents& e, double residual_limit = 1e-2);

nlohmann::json to_json(const PohozaevReport& r);

}  // namespace compacton
