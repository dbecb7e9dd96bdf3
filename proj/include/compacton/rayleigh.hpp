#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "compacton/mesh.hpp"

namespace compacton {

struct Quotients {
  double R0;
  double R1;
  double RP;
};

/// R^0(tu), R^1(tu), R^P(tu) from the bundle of u.
Quotients quotients(const IntegralBundle& b, double t, const Exponents& e);

struct FiberDiagnostics {
  double t0 = 0.0;
  double t1 = 0.0;
  double tP = 0.0;
  double t1P = 0.0;
  double lambda0_u = 0.0;
  double lambda1P_u = 0.0;
  double lambda1_u = 0.0;  ///< min_t R^1(tu)
};

FiberDiagnostics scale_factors(const IntegralBundle& b, const Exponents& e);

double lambda0_of(const IntegralBundle& b, const Exponents& e);
double lambda1P_of(const IntegralBundle& b, const Exponents& e);
double lambda1_of(const IntegralBundle& b, const Exponents& e);

/// c in lambda0(u) = c I2^{(p-q)/(1-q)} S_q^{(1-p)/(1-q)} / S_p.
double lambda0_constant(const Exponents& e);
/// Same structure for lambda1P restricted to fields with I_z = 0.
double lambda1P_constant_zconst(const Exponents& e);

/// Closed forms shared by the double and dual-number paths. Arguments are the
/// four independent integrals; nothing here checks for degeneracy.
namespace formulas {

template <class S>
S t0(const S& I2, const S& Sq, const Exponents& e) {
  const double q = e.q, p = e.p;
  return pow(2.0 * (p - q) * Sq / ((1.0 - p) * (q + 1.0) * I2), 1.0 / (1.0 - q));
}

template <class S>
S t1(const S& I2, const S& Sq, const Exponents& e) {
  const double q = e.q, p = e.p;
  return pow((p - q) * Sq / ((1.0 - p) * I2), 1.0 / (1.0 - q));
}

template <class S>
S tP(const S& Ix, const S& Iz, const S& Sq, const Exponents& e) {
  const double q = e.q, p = e.p;
  const S D = Ix / e.two_star() + 0.5 * Iz;
  return pow((p - q) * Sq / ((q + 1.0) * (1.0 - p) * D), 1.0 / (1.0 - q));
}

template <class S>
S t1P(const S& Ix, const S& Iz, const S& Sq, const Exponents& e) {
  const double q = e.q, p = e.p, ts = e.two_star();
  const S D = ((ts - p - 1.0) / ts) * Ix + (0.5 * (1.0 - p)) * Iz;
  return pow((p - q) * Sq / ((q + 1.0) * D), 1.0 / (1.0 - q));
}

template <class S>
S R0(const S& I2, const S& Sq, const S& Sp, const S& t, const Exponents& e) {
  const double q = e.q, p = e.p;
  return (p + 1.0) * (0.5 * pow(t, 1.0 - p) * I2 + pow(t, q - p) * Sq / (q + 1.0)) / Sp;
}

template <class S>
S R1(const S& I2, const S& Sq, const S& Sp, const S& t, const Exponents& e) {
  return (pow(t, 1.0 - e.p) * I2 + pow(t, e.q - e.p) * Sq) / Sp;
}

template <class S>
S RP(const S& Ix, const S& Iz, const S& Sq, const S& Sp, const S& t, const Exponents& e) {
  const double q = e.q, p = e.p;
  const S D = Ix / e.two_star() + 0.5 * Iz;
  return (p + 1.0) * (pow(t, 1.0 - p) * D + pow(t, q - p) * Sq / (q + 1.0)) / Sp;
}

template <class S>
S lambda0(const S& Ix, const S& Iz, const S& Sq, const S& Sp, const Exponents& e) {
  const S I2 = Ix + Iz;
  return R0(I2, Sq, Sp, t0(I2, Sq, e), e);
}

template <class S>
S lambda1P(const S& Ix, const S& Iz, const S& Sq, const S& Sp, const Exponents& e) {
  return R1(Ix + Iz, Sq, Sp, t1P(Ix, Iz, Sq, e), e);
}

}  // namespace formulas

/// Euclidean gradients of the four bundle integrals with respect to the nodal
/// values (quadrature weights included).
struct BundleGradient {
  IntegralBundle bundle;
  Field d_Ix;
  Field d_Iz;
  Field d_Sq;
  Field d_Sp;
};

BundleGradient bundle_gradient(const Field& u, const Exponents& e);

enum class QuotientKind { lambda0, lambda1P, lambda0_omega, Lambda1P_omega };

std::string to_string(QuotientKind k);
QuotientKind quotient_kind_from_string(const std::string& s);
bool is_z_constant_kind(QuotientKind k);

/// Quotient value of a field and its Euclidean gradient.
double quotient_value(QuotientKind k, const IntegralBundle& b, const Exponents& e);
double quotient_with_gradient(QuotientKind k, const Field& u, const Exponents& e, Field& grad);

struct QuotientOptions {
  int max_iters = 400;
  double tol_grad = 1e-7;   ///< on the preconditioned gradient, relative to the value
  double tol_value = 1e-13; ///< relative decrease considered stagnation
  int memory = 8;
  double mu = 1.0;          ///< mass shift of the H^1 preconditioner
};

struct QuotientResult {
  QuotientKind which;
  double value = 0.0;
  Field minimizer;
  int iterations = 0;
  int seed_index = -1;
  bool converged = false;
  double grad_norm = 0.0;
  std::vector<double> seed_values;  ///< quotient at each seed before descent
};

/// Multi-start minimisation of a 0-homogeneous quotient. The "_omega" kinds
/// search z-constant fields only. Throws InvalidArgument without seeds.
QuotientResult minimize_quotient(QuotientKind which, const GridPtr& grid, const Exponents& e,
                                 const std::vector<Field>& seeds, const QuotientOptions& opts = {});

/// Seed fields: z-constant bump (1 - r/R)^2_+, and the bump modulated by
/// 1 + cos(pi z / T).
std::vector<Field> default_seeds(const GridPtr& grid);

nlohmann::json to_json(const QuotientResult& r, const std::string& minimizer_file = "");

}  // namespace compacton
