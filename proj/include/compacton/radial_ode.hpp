#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "compacton/mesh.hpp"

namespace compacton {

struct ProfilePoint {
  double r;
  double psi;
  double dpsi;
};

enum class ShootClass { compacton, overshoot, undershoot };
std::string to_string(ShootClass c);

struct ShootOptions {
  double tol_shoot = 1e-8;  ///< multiplied by the initial height a
  double a_hi = 1e3;
  double rtol = 1e-13;
  double atol = 1e-16;
  double r_max = 1e4;
  long max_steps = 5'000'000;
  double tail_fraction = 1e-5;  ///< profile below tail_fraction * a comes from the first integral
};

/// Radial profile of -psi'' - (M-1)/r psi' = psi^p - psi^q in R^M with
/// psi(0) = a, psi'(0) = 0 (lambda = 1).
struct ShootResult {
  double a = 0.0;
  int M = 0;
  double q = 0.0;
  double p = 0.0;
  double R_M = 0.0;  ///< support radius (compacton) or radius of the terminating event
  std::vector<ProfilePoint> profile;
  ShootClass classification = ShootClass::undershoot;
  double res_psi = 0.0;
  double res_dpsi = 0.0;
  int bisection_steps = 0;
  /// The uniqueness theorem backing the construction assumes M >= 3.
  bool within_theorem() const { return M >= 3; }
  double max_psi() const;
};

/// Adaptive Dormand-Prince integration with event classification. Throws
/// IntegratorFailure on step-size underflow.
ShootResult shoot(double a, int M, double q, double p, const ShootOptions& opts = {});

/// Bisection on a in [1, a_hi] between undershoot and overshoot. Throws
/// BracketFailure if a_hi does not overshoot.
ShootResult find_compacton(int M, double q, double p, const ShootOptions& opts = {});

/// psi and psi' at radius r by cubic Hermite interpolation (zero beyond R_M
/// for a compacton).
ProfilePoint profile_at(const ShootResult& base, double r);

/// E = psi'^2/2 + psi^{p+1}/(p+1) - psi^{q+1}/(q+1).
double first_integral(const ProfilePoint& pt, double q, double p);

struct Rescaling {
  double sigma = 1.0;
  double lambda_R = 1.0;
  double amplitude_factor = 1.0;  ///< sigma^{2/(1-q)}
};

/// u(y) = amplitude * psi(y / sigma) solves the equation with lambda_R and is
/// supported on the ball of radius R_target.
Rescaling rescale(const ShootResult& base, double R_target);

/// Threshold (R_M / R)^{2(p-q)/(1-q)} at which the compacton fills B_R.
double lambda_star_ball(const ShootResult& base, double R);

/// z-constant field sampling the rescaled profile; zero for r >= R_target.
Field embed(const ShootResult& base, double R_target, const GridPtr& grid);

nlohmann::json to_json(const ShootResult& r);

}  // namespace compacton
