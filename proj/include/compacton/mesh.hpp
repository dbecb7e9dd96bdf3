#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace compacton {

/// Exponent triple of the nonlinearity lambda|u|^{p-1}u - |u|^{q-1}u in
/// dimension N (the x-dimension of the cylinder cross-section).
struct Exponents {
  double q = 0.1;
  double p = 0.2;
  int N = 4;

  /// Validating constructor: 0 < q < p < 1, N >= 3.
  static Exponents make(double q, double p, int N);

  double two_star() const { return 2.0 * N / (N - 2.0); }
  /// N(1-q)(1-p) - 2(1+q)(1+p); positive exactly on the subcritical set.
  double d_star() const { return N * (1.0 - q) * (1.0 - p) - 2.0 * (1.0 + q) * (1.0 + p); }
  bool in_subcritical_set() const { return d_star() > 0.0; }
};

/// Surface area of the unit sphere S^{N-1} in R^N, 2 pi^{N/2} / Gamma(N/2).
double unit_sphere_area(int N);

/// Cylinder (-T, T) x B_R in R x R^N.
struct Geometry {
  double T = 1.0;
  double R_omega = 1.0;
  int N = 4;

  static Geometry make(double T, double R_omega, int N);
  double omega() const { return unit_sphere_area(N); }
};

/// Tensor grid: nz periodic cells in z, nr radial cells (nr + 1 nodes, the
/// last one carrying the Dirichlet value).
class Grid {
 public:
  Grid(const Geometry& geometry, int nz, int nr);

  const Geometry& geometry() const { return geometry_; }
  int nz() const { return nz_; }
  int nr() const { return nr_; }
  int row_stride() const { return nr_ + 1; }
  std::size_t size() const { return static_cast<std::size_t>(nz_) * row_stride(); }
  double hz() const { return hz_; }
  double hr() const { return hr_; }
  double T() const { return geometry_.T; }
  double R() const { return geometry_.R_omega; }
  int N() const { return geometry_.N; }
  double omega() const { return omega_; }
  double z(int i) const { return -geometry_.T + i * hz_; }
  double r(int j) const { return j * hr_; }

  /// Radial quadrature weights for \int_0^R f r^{N-1} dr (size nr + 1).
  std::span<const double> radial_weights() const { return w_; }
  /// Exact \int_{r_j}^{r_{j+1}} r^{N-1} dr (size nr).
  std::span<const double> edge_masses() const { return m_; }
  /// Cell quadrature weight hz * omega * w_j.
  double weight(int j) const { return hz_ * omega_ * w_[j]; }
  std::span<const double> cell_weights() const { return cell_w_; }

  /// Radial stencil of the strong-form operator -(u_rr + (N-1)/r u_r):
  /// (outer_j + inner_j) u_j - outer_j u_{j+1} - inner_j u_{j-1}.
  std::span<const double> radial_outer() const { return outer_; }
  std::span<const double> radial_inner() const { return inner_; }

 private:
  Geometry geometry_;
  int nz_;
  int nr_;
  double hz_;
  double hr_;
  double omega_;
  std::vector<double> w_;
  std::vector<double> m_;
  std::vector<double> cell_w_;
  std::vector<double> outer_;
  std::vector<double> inner_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const Geometry& geometry, int nz, int nr);

/// Nodal function u(z_i, r_j), row-major in (i, j), j = 0..nr.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid, double fill = 0.0);
  Field(GridPtr grid, std::vector<double> values);

  template <class F>
  static Field sample(GridPtr grid, F&& f) {
    Field u(grid);
    for (int i = 0; i < grid->nz(); ++i)
      for (int j = 0; j < grid->nr(); ++j) u(i, j) = f(grid->z(i), grid->r(j));
    return u;
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double& operator()(int i, int j) { return values_[index(i, j)]; }
  double operator()(int i, int j) const { return values_[index(i, j)]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> row(int i) const;
  std::size_t size() const { return values_.size(); }

  /// values[i][nr] == 0 for all i and every entry finite.
  bool is_valid() const;
  double max_abs() const;
  bool is_zero() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// this += a * x
  void axpy(double a, const Field& x);
  Field abs() const;
  /// Cyclic shift in z by `cells` (u'(i) = u(i - cells)).
  Field shifted_z(int cells) const;
  /// Replace every row by the mean row; the result is bitwise z-constant.
  void make_z_constant();

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * grid_->row_stride() + static_cast<std::size_t>(j);
  }
  GridPtr grid_;
  std::vector<double> values_;
};

Field operator*(double s, Field u);
Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);

/// The five integrals every functional and quotient consumes.
struct IntegralBundle {
  double I_x = 0.0;   ///< \int |grad_x u|^2
  double I_z = 0.0;   ///< \int |u_z|^2
  double I2 = 0.0;    ///< I_x + I_z
  double S_q = 0.0;   ///< \int |u|^{q+1}
  double S_p = 0.0;   ///< \int |u|^{p+1}

  static IntegralBundle make(double I_x, double I_z, double S_q, double S_p) {
    return {I_x, I_z, I_x + I_z, S_q, S_p};
  }
};

/// Weighted quadrature of a nodal field over the cylinder.
double integrate(const Field& f);

/// Central difference in z with periodic wraparound.
Field d_z(const Field& u);
/// Central difference in r; second-order one-sided at both r = 0 and r = R.
/// The result is a derivative, so its last column is generally nonzero.
Field d_r(const Field& u);

/// Gradient energies from edge differences, power sums from the nodal
/// quadrature.
IntegralBundle integrals(const Field& u, double q, double p);

struct GradientIntegrals {
  double I_x;
  double I_z;
};
GradientIntegrals gradient_integrals(const Field& u);

/// Partial stiffness products: out_z = K_z u / W, out_r = K_r u / W (strong
/// form, so that the gradient of I_z is 2 W out_z, likewise for I_x).
void stiffness_parts(const Field& u, Field& out_z, Field& out_r);

/// Weighted inner product sum_ij W_ij a_ij b_ij.
double weighted_dot(const Field& a, const Field& b);

}  // namespace compacton
