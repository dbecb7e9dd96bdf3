#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "compacton/functionals.hpp"
#include "compacton/mesh.hpp"

namespace compacton {

/// Positive roots of g(t) = t^{1-q} I2 - lambda t^{p-q} S_p + S_q.
struct NehariRoots {
  std::optional<double> t_star;   ///< fiber local maximum
  std::optional<double> t_tilde;  ///< fiber local minimum
  double lambda_min_ray = 0.0;    ///< min_t R^1(tu)
  double t1 = 0.0;                ///< argmin_t R^1(tu)
};

NehariRoots nehari_roots(const IntegralBundle& b, double lambda, const Exponents& e,
                         double tol_root = 1e-12);

/// g(t) of the bundle, as defined above.
double nehari_g(const IntegralBundle& b, double lambda, double t, const Exponents& e);

/// t_tilde * v when the larger root exists and satisfies P <= 0, else nothing.
std::optional<Field> project_to_M(const Field& v, double lambda, const Exponents& e);

struct SolverOptions {
  int max_iters = 3000;
  double tol_grad = 1e-8;
  double tol_root = 1e-12;
  double tol_P = 1e-8;      ///< multiplied by I2 + S_q
  double tol_res = 1e-6;    ///< sup norm of the first variation
  double tol_J = 1e-10;     ///< relative energy decrease treated as stagnation
  int memory = 8;
  double mu = 1.0;
  bool newton_polish = true;
  int newton_iters = 40;
  double eps_supp = 1e-6;   ///< multiplied by max|u|
  double eps_flux = 1e-3;   ///< multiplied by max|d_r u|
  double eps_ztriv = 1e-6;
};

struct SolveResult {
  Field u;
  double lambda = 0.0;
  IntegralBundle bundle;
  double phi = 0.0;
  double P = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double residual = 0.0;
  std::vector<double> support_radius;  ///< rho(z_i)
  double Iz_fraction = 0.0;
  double wall_flux_max = 0.0;          ///< max_z |d_r u(z, R)|
  bool compact_support = false;
  bool periodically_trivial = false;
  bool feasible = false;
  bool converged = false;
  bool constraint_active = false;
  int iterations = 0;
  int newton_iterations = 0;
  int seed_index = -1;
  std::vector<double> seed_energies;   ///< Phi at each projected seed (NaN if infeasible)
};

/// Diagnostics and flags of a point u (no optimisation).
SolveResult evaluate_solution(const Field& u, double lambda, const Exponents& e,
                              const SolverOptions& opts = {});

/// Approximate minimiser of Phi over the Nehari set with P <= 0, by descent on
/// J(v) = Phi(t_tilde(v) v) from each seed. Throws Infeasible when no seed
/// admits a feasible point.
SolveResult minimize_constrained(double lambda, const GridPtr& grid, const Exponents& e,
                                 const std::vector<Field>& seeds, const SolverOptions& opts = {});

nlohmann::json to_json(const SolveResult& r, const std::string& field_file = "");

}  // namespace compacton
