#pragma once

#include <functional>
#include <limits>

#include "compacton/mesh.hpp"
#include "compacton/sparse.hpp"

namespace compacton {

/// Minimisation problem over fields. The objective and the optional
/// constraint must be invariant under positive scaling of the field; the
/// optimizer keeps iterates on the unit sphere of the preconditioner norm.
struct Problem {
  /// Returns false when x lies outside the objective's domain. grad may be
  /// null; otherwise it receives the Euclidean gradient.
  std::function<bool(const Field& x, double& f, Field* grad)> objective;
  /// Single inequality constraint c(x) <= 0 (optional).
  std::function<bool(const Field& x, double& c, Field* grad)> constraint;
  /// Applied to every trial iterate (e.g. u -> |u|).
  std::function<void(Field& x)> retract;
  /// Applied to every search direction (e.g. restriction to a subspace).
  std::function<void(Field& d)> project;
};

struct MinimizeOptions {
  int max_iters = 400;
  double tol_grad = 1e-7;       ///< preconditioned gradient norm / value scale
  double tol_value = 1e-13;     ///< relative decrease treated as stagnation
  int stagnation_window = 5;
  int memory = 8;
  double value_scale = 0.0;     ///< floor for the scale of relative tests
  double target = -std::numeric_limits<double>::infinity();  ///< stop once f <= target
  double constraint_margin = 0.0;  ///< restoration aims at c in [-margin, 0]
};

struct MinimizeResult {
  Field x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool constraint_active = false;
  double grad_norm = 0.0;
};

/// Preconditioned L-BFGS with Armijo backtracking. The inequality constraint
/// is handled as an active set: directions are projected onto the tangent
/// space in the preconditioner metric and trial points that violate it are
/// pulled back along the constraint's preconditioned gradient.
MinimizeResult minimize(const Problem& problem, Field x0, const Preconditioner& precond,
                        const MinimizeOptions& opts);

}  // namespace compacton
