#include "compacton/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SparseCholesky>

namespace compacton {
namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<Triplet> stiffness_triplets(const Grid& g) {
  const int nz = g.nz();
  const int nr = g.nr();
  const double cz = g.hz() * g.omega() / (g.hz() * g.hz());
  const double cr = g.hz() * g.omega() / (g.hr() * g.hr());
  const auto w = g.radial_weights();
  const auto m = g.edge_masses();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nz) * nr * 5);
  for (int i = 0; i < nz; ++i) {
    const int ip = (i + 1) % nz;
    for (int j = 0; j < nr; ++j) {
      const int k = i * nr + j;
      const int kz = ip * nr + j;
      const double az = cz * w[j];
      t.emplace_back(k, k, az);
      t.emplace_back(kz, kz, az);
      t.emplace_back(k, kz, -az);
      t.emplace_back(kz, k, -az);
      const double ar = cr * m[j];
      t.emplace_back(k, k, ar);
      if (j + 1 < nr) {
        const int kr = k + 1;
        t.emplace_back(kr, kr, ar);
        t.emplace_back(k, kr, -ar);
        t.emplace_back(kr, k, -ar);
      }
    }
  }
  return t;
}

}  // namespace

Eigen::VectorXd pack(const Field& u) {
  const Grid& g = u.grid();
  Eigen::VectorXd x(static_cast<Eigen::Index>(g.nz()) * g.nr());
  for (int i = 0; i < g.nz(); ++i)
    for (int j = 0; j < g.nr(); ++j) x[i * g.nr() + j] = u(i, j);
  return x;
}

Field unpack(const GridPtr& grid, const Eigen::VectorXd& x) {
  Field u(grid);
  for (int i = 0; i < grid->nz(); ++i)
    for (int j = 0; j < grid->nr(); ++j) u(i, j) = x[i * grid->nr() + j];
  return u;
}

SparseMatrix stiffness_matrix(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.nz()) * g.nr();
  SparseMatrix K(n, n);
  const auto t = stiffness_triplets(g);
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

Eigen::VectorXd mass_diagonal(const Grid& g) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(g.nz()) * g.nr());
  for (int i = 0; i < g.nz(); ++i)
    for (int j = 0; j < g.nr(); ++j) w[i * g.nr() + j] = g.weight(j);
  return w;
}

struct Preconditioner::Impl {
  SparseMatrix A;
  Eigen::SimplicialLDLT<SparseMatrix> solver;
};

Preconditioner::Preconditioner(GridPtr grid, double mu)
    : grid_(std::move(grid)), impl_(std::make_unique<Impl>()) {
  impl_->A = stiffness_matrix(*grid_);
  const Eigen::VectorXd w = mass_diagonal(*grid_);
  for (Eigen::Index k = 0; k < w.size(); ++k) impl_->A.coeffRef(k, k) += mu * w[k];
  impl_->solver.compute(impl_->A);
}

Preconditioner::~Preconditioner() = default;
Preconditioner::Preconditioner(Preconditioner&&) noexcept = default;

Field Preconditioner::apply(const Field& b) const {
  return unpack(grid_, impl_->solver.solve(pack(b)));
}

double Preconditioner::norm2(const Field& x) const {
  const Eigen::VectorXd v = pack(x);
  return v.dot(impl_->A * v);
}

bool newton_direction(const Field& u, const Field& euclidean_grad, double lambda,
                      const Exponents& e, Field& direction) {
  const Grid& g = u.grid();
  SparseMatrix H = stiffness_matrix(g);
  const double floor = std::max(u.max_abs(), 1e-300) * 1e-14;
  for (int i = 0; i < g.nz(); ++i) {
    for (int j = 0; j < g.nr(); ++j) {
      const double a = std::max(std::abs(u(i, j)), floor);
      const double curv = e.q * std::pow(a, e.q - 1.0) - lambda * e.p * std::pow(a, e.p - 1.0);
      const int k = i * g.nr() + j;
      H.coeffRef(k, k) += g.weight(j) * curv;
    }
  }
  // Symmetric diagonal scaling by W^{-1/2}: the weights span several orders of
  // magnitude between the axis and the wall.
  const Eigen::VectorXd s = mass_diagonal(g).cwiseSqrt().cwiseInverse();
  const SparseMatrix Hs = s.asDiagonal() * H * s.asDiagonal();
  Eigen::SimplicialLDLT<SparseMatrix> solver(Hs);
  if (solver.info() != Eigen::Success) return false;
  if ((solver.vectorD().array() <= 0.0).any()) return false;
  const Eigen::VectorXd y = solver.solve(-s.cwiseProduct(pack(euclidean_grad)));
  const Eigen::VectorXd d = s.cwiseProduct(y);
  if (!d.allFinite()) return false;
  direction = unpack(u.grid_ptr(), d);
  return true;
}

}  // namespace compacton
