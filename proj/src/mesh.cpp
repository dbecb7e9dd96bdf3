#include "compacton/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "compacton/error.hpp"
#include "compacton/kernels.hpp"

namespace compacton {

Exponents Exponents::make(double q, double p, int N) {
  if (!(q > 0.0 && q < p && p < 1.0))
    throw InvalidArgument("exponents must satisfy 0 < q < p < 1 (got q=" + std::to_string(q) +
                          ", p=" + std::to_string(p) + ")");
  if (N < 3) throw InvalidArgument("dimension N must be >= 3");
  return Exponents{q, p, N};
}

double unit_sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

Geometry Geometry::make(double T, double R_omega, int N) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidArgument("half-period T must be > 0");
  if (!(R_omega > 0.0) || !std::isfinite(R_omega)) throw InvalidArgument("R_omega must be > 0");
  if (N < 1) throw InvalidArgument("dimension must be >= 1");
  return Geometry{T, R_omega, N};
}

Grid::Grid(const Geometry& geometry, int nz, int nr)
    : geometry_(Geometry::make(geometry.T, geometry.R_omega, geometry.N)), nz_(nz), nr_(nr) {
  if (nz < 4 || nz % 2 != 0) throw InvalidArgument("nz must be even and >= 4");
  if (nr < 4) throw InvalidArgument("nr must be >= 4");
  hz_ = 2.0 * geometry_.T / nz_;
  hr_ = geometry_.R_omega / nr_;
  omega_ = unit_sphere_area(geometry_.N);

  const int N = geometry_.N;
  const double dN = static_cast<double>(N);
  m_.resize(nr_);
  for (int j = 0; j < nr_; ++j)
    m_[j] = (std::pow(r(j + 1), dN) - std::pow(r(j), dN)) / dN;

  // Weights that make the conservative radial stencil exact on 1 and r^2; the
  // end weight closes the sum to R^N / N so constants integrate exactly.
  w_.assign(nr_ + 1, 0.0);
  w_[0] = m_[0] / (2.0 * dN);
  double partial = w_[0];
  for (int j = 1; j < nr_; ++j) {
    w_[j] = (m_[j] * (2.0 * j + 1.0) - m_[j - 1] * (2.0 * j - 1.0)) / (2.0 * dN);
    partial += w_[j];
  }
  w_[nr_] = std::pow(geometry_.R_omega, dN) / dN - partial;
  if (!(w_[nr_] > 0.0)) throw InvalidArgument("radial grid too coarse for positive weights");

  cell_w_.resize(nr_ + 1);
  for (int j = 0; j <= nr_; ++j) cell_w_[j] = hz_ * omega_ * w_[j];

  outer_.assign(nr_, 0.0);
  inner_.assign(nr_, 0.0);
  const double hr2 = hr_ * hr_;
  for (int j = 0; j < nr_; ++j) {
    outer_[j] = m_[j] / (w_[j] * hr2);
    inner_[j] = j > 0 ? m_[j - 1] / (w_[j] * hr2) : 0.0;
  }
}

GridPtr build_grid(const Geometry& geometry, int nz, int nr) {
  return std::make_shared<const Grid>(geometry, nz, nr);
}

Field::Field(GridPtr grid, double fill) : grid_(std::move(grid)) {
  values_.assign(grid_->size(), fill);
  for (int i = 0; i < grid_->nz(); ++i) (*this)(i, grid_->nr()) = 0.0;
}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw InvalidArgument("field value count does not match the grid");
}

std::span<const double> Field::row(int i) const {
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(i) * grid_->row_stride(),
                                                  grid_->row_stride());
}

bool Field::is_valid() const {
  if (!grid_ || values_.size() != grid_->size()) return false;
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  for (int i = 0; i < grid_->nz(); ++i)
    if ((*this)(i, grid_->nr()) != 0.0) return false;
  return true;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

Field& Field::operator+=(const Field& other) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void Field::axpy(double a, const Field& x) {
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += a * x.values_[k];
}

Field Field::abs() const {
  Field out = *this;
  for (double& v : out.values_) v = std::abs(v);
  return out;
}

Field Field::shifted_z(int cells) const {
  Field out(grid_);
  const int nz = grid_->nz();
  const int shift = ((cells % nz) + nz) % nz;
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j <= grid_->nr(); ++j) out((i + shift) % nz, j) = (*this)(i, j);
  return out;
}

void Field::make_z_constant() {
  const int nz = grid_->nz();
  const int nr = grid_->nr();
  std::vector<double> mean(nr + 1, 0.0);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j <= nr; ++j) mean[j] += (*this)(i, j);
  for (double& m : mean) m /= nz;
  mean[nr] = 0.0;
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j <= nr; ++j) (*this)(i, j) = mean[j];
}

Field operator*(double s, Field u) {
  u *= s;
  return u;
}

Field operator+(Field a, const Field& b) {
  a += b;
  return a;
}

Field operator-(Field a, const Field& b) {
  a -= b;
  return a;
}

double integrate(const Field& f) {
  const Grid& g = f.grid();
  double acc = 0.0;
  for (int i = 0; i < g.nz(); ++i)
    for (int j = 0; j <= g.nr(); ++j) acc += g.radial_weights()[j] * f(i, j);
  return g.hz() * g.omega() * acc;
}

Field d_z(const Field& u) {
  const Grid& g = u.grid();
  Field out(u.grid_ptr());
  const int nz = g.nz();
  const double inv = 1.0 / (2.0 * g.hz());
  for (int i = 0; i < nz; ++i) {
    const int ip = (i + 1) % nz;
    const int im = (i + nz - 1) % nz;
    for (int j = 0; j <= g.nr(); ++j) out(i, j) = (u(ip, j) - u(im, j)) * inv;
  }
  return out;
}

Field d_r(const Field& u) {
  const Grid& g = u.grid();
  Field out(u.grid_ptr());
  const int nr = g.nr();
  const double inv = 1.0 / (2.0 * g.hr());
  for (int i = 0; i < g.nz(); ++i) {
    out(i, 0) = (-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) * inv;
    for (int j = 1; j < nr; ++j) out(i, j) = (u(i, j + 1) - u(i, j - 1)) * inv;
    out(i, nr) = (3.0 * u(i, nr) - 4.0 * u(i, nr - 1) + u(i, nr - 2)) * inv;
  }
  return out;
}

GradientIntegrals gradient_integrals(const Field& u) {
  const Grid& g = u.grid();
  const kernels::Layout layout{g.nz(), g.nr()};
  double sum_z = 0.0;
  double sum_r = 0.0;
  kernels::active().gradient_energy(layout, u.values().data(), g.radial_weights().data(),
                                    g.edge_masses().data(), &sum_z, &sum_r);
  const double scale = g.hz() * g.omega();
  return {scale * sum_r / (g.hr() * g.hr()), scale * sum_z / (g.hz() * g.hz())};
}

IntegralBundle integrals(const Field& u, double q, double p) {
  const Grid& g = u.grid();
  const GradientIntegrals gi = gradient_integrals(u);
  const double scale = g.hz() * g.omega();
  double s_q = 0.0;
  double s_p = 0.0;
  const auto w = g.radial_weights();
  for (int i = 0; i < g.nz(); ++i) {
    const auto row = u.row(i);
    for (int j = 0; j <= g.nr(); ++j) {
      const double a = std::abs(row[j]);
      if (a == 0.0) continue;
      s_q += w[j] * std::pow(a, q + 1.0);
      s_p += w[j] * std::pow(a, p + 1.0);
    }
  }
  return IntegralBundle::make(gi.I_x, gi.I_z, scale * s_q, scale * s_p);
}

void stiffness_parts(const Field& u, Field& out_z, Field& out_r) {
  const Grid& g = u.grid();
  if (out_z.size() != u.size()) out_z = Field(u.grid_ptr());
  if (out_r.size() != u.size()) out_r = Field(u.grid_ptr());
  const kernels::Layout layout{g.nz(), g.nr()};
  kernels::active().stiffness_parts(layout, u.values().data(), g.radial_outer().data(),
                                    g.radial_inner().data(), 1.0 / (g.hz() * g.hz()),
                                    out_z.values().data(), out_r.values().data());
}

double weighted_dot(const Field& a, const Field& b) {
  const Grid& g = a.grid();
  const kernels::Layout layout{g.nz(), g.nr()};
  return g.hz() * g.omega() *
         kernels::active().weighted_dot(layout, a.values().data(), b.values().data(),
                                        g.radial_weights().data());
}

}  // namespace compacton
