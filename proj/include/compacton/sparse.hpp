#pragma once

#include <memory>

#include <Eigen/SparseCore>

#include "compacton/mesh.hpp"

namespace compacton {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Unknowns are the nodes with j < nr, ordered k = i * nr + j.
Eigen::VectorXd pack(const Field& u);
Field unpack(const GridPtr& grid, const Eigen::VectorXd& x);

/// Stiffness matrix K with u^T K u = I_z + I_x (edge differences).
SparseMatrix stiffness_matrix(const Grid& g);
/// Diagonal of the quadrature weights over the unknowns.
Eigen::VectorXd mass_diagonal(const Grid& g);

/// H^1 preconditioner: solves (K + mu W) x = b by a sparse Cholesky
/// factorisation computed once.
class Preconditioner {
 public:
  Preconditioner(GridPtr grid, double mu);
  ~Preconditioner();
  Preconditioner(Preconditioner&&) noexcept;

  Field apply(const Field& b) const;
  /// x^T (K + mu W) x
  double norm2(const Field& x) const;
  const GridPtr& grid() const { return grid_; }

 private:
  struct Impl;
  GridPtr grid_;
  std::unique_ptr<Impl> impl_;
};

/// Newton step for the energy: solves (K + W diag(q|u|^{q-1} - lambda p|u|^{p-1})) d = -g.
/// Returns false when the matrix is not positive definite.
bool newton_direction(const Field& u, const Field& euclidean_grad, double lambda,
                      const Exponents& e, Field& direction);

}  // namespace compacton
