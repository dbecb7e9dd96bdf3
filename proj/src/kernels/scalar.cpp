#include "compacton/kernels.hpp"

namespace compacton::kernels {
namespace {

void stiffness_parts_scalar(Layout l, const double* u, const double* outer, const double* inner,
                            double inv_hz2, double* out_z, double* out_r) {
  const int s = l.stride();
  for (int i = 0; i < l.nz; ++i) {
    const double* row = u + static_cast<long>(i) * s;
    const double* up = u + static_cast<long>((i + 1) % l.nz) * s;
    const double* dn = u + static_cast<long>((i + l.nz - 1) % l.nz) * s;
    double* oz = out_z + static_cast<long>(i) * s;
    double* orr = out_r + static_cast<long>(i) * s;
    oz[0] = ((row[0] + row[0]) - up[0] - dn[0]) * inv_hz2;
    orr[0] = outer[0] * row[0] - outer[0] * row[1];
    for (int j = 1; j < l.nr; ++j) {
      oz[j] = ((row[j] + row[j]) - up[j] - dn[j]) * inv_hz2;
      orr[j] = (outer[j] + inner[j]) * row[j] - outer[j] * row[j + 1] - inner[j] * row[j - 1];
    }
    oz[l.nr] = 0.0;
    orr[l.nr] = 0.0;
  }
}

void gradient_energy_scalar(Layout l, const double* u, const double* w, const double* m,
                            double* sum_z, double* sum_r) {
  const int s = l.stride();
  double acc_z = 0.0;
  double acc_r = 0.0;
  for (int i = 0; i < l.nz; ++i) {
    const double* row = u + static_cast<long>(i) * s;
    const double* up = u + static_cast<long>((i + 1) % l.nz) * s;
    for (int j = 0; j <= l.nr; ++j) {
      const double d = up[j] - row[j];
      acc_z += w[j] * (d * d);
    }
    for (int j = 0; j < l.nr; ++j) {
      const double d = row[j + 1] - row[j];
      acc_r += m[j] * (d * d);
    }
  }
  *sum_z = acc_z;
  *sum_r = acc_r;
}

double weighted_dot_scalar(Layout l, const double* a, const double* b, const double* w) {
  const int s = l.stride();
  double acc = 0.0;
  for (int i = 0; i < l.nz; ++i) {
    const double* ra = a + static_cast<long>(i) * s;
    const double* rb = b + static_cast<long>(i) * s;
    for (int j = 0; j <= l.nr; ++j) acc += w[j] * (ra[j] * rb[j]);
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, "scalar", &stiffness_parts_scalar,
                                 &gradient_energy_scalar, &weighted_dot_scalar};
  return table;
}

}  // namespace compacton::kernels
