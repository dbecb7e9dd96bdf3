#pragma once

#include "compacton/mesh.hpp"

namespace compacton {

struct ProblemParams {
  Exponents exponents;
  Geometry geometry;
  double lambda = 1.0;
};

/// Phi = I2/2 - lambda S_p/(p+1) + S_q/(q+1).
double energy(const IntegralBundle& b, double lambda, const Exponents& e);

/// P = I_x/2* + I_z/2 + S_q/(q+1) - lambda S_p/(p+1).
double pohozaev(const IntegralBundle& b, double lambda, const Exponents& e);

/// d/dt Phi(tu) at t = 1: I2 - lambda S_p + S_q.
double fiber_phi1(const IntegralBundle& b, double lambda);

/// d^2/dt^2 Phi(tu) at t = 1: I2 - lambda p S_p + q S_q.
double fiber_phi2(const IntegralBundle& b, double lambda, const Exponents& e);

/// Bundle of t*u from the bundle of u.
IntegralBundle scale_bundle(const IntegralBundle& b, double t, const Exponents& e);

/// Strong-form residual -u_zz - Delta_x u - lambda|u|^{p-1}u + |u|^{q-1}u at
/// every node (zero on the Dirichlet column). The weighted pairing with v is
/// exactly the derivative of the discrete energy in direction v.
Field first_variation(const Field& u, double lambda, const Exponents& e);

/// Sup norm of a residual field over the unknown nodes.
double residual_norm(const Field& residual);

}  // namespace compacton
