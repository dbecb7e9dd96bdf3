#pragma once

// Data-parallel inner loops over the cylinder grid. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at run
// time. Elementwise kernels are bitwise identical across variants (no FMA
// contraction); reductions agree to rounding.

#include <string_view>

namespace compacton::kernels {

enum class Isa { scalar, avx2 };

/// Grid layout shared by every kernel: nz rows of nr + 1 doubles; column nr
/// holds the Dirichlet node.
struct Layout {
  int nz;
  int nr;
  int stride() const { return nr + 1; }
};

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// out_z = (2u_i - u_{i+1} - u_{i-1}) * inv_hz2 (periodic in i);
  /// out_r = (outer_j + inner_j) u_j - outer_j u_{j+1} - inner_j u_{j-1}
  /// (inner_0 == 0). Column nr of both outputs is set to zero.
  void (*stiffness_parts)(Layout l, const double* u, const double* outer, const double* inner,
                          double inv_hz2, double* out_z, double* out_r);

  /// sum_z = sum_ij w_j (u_{i+1,j} - u_{ij})^2,
  /// sum_r = sum_i sum_{j<nr} m_j (u_{i,j+1} - u_{ij})^2.
  void (*gradient_energy)(Layout l, const double* u, const double* w, const double* m,
                          double* sum_z, double* sum_r);

  /// sum_ij w_j a_ij b_ij over all nr + 1 columns.
  double (*weighted_dot)(Layout l, const double* a, const double* b, const double* w);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Kernel table used by the library. Defaults to the widest supported ISA;
/// the environment variable COMPACTON_KERNELS=scalar forces the reference.
const KernelTable& active();
void select(Isa isa);

}  // namespace compacton::kernels
