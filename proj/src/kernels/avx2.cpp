#include "compacton/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define COMPACTON_HAVE_AVX2 1
#include <immintrin.h>
#else
#define COMPACTON_HAVE_AVX2 0
#endif

namespace compacton::kernels {

#if COMPACTON_HAVE_AVX2
namespace {

#define COMPACTON_AVX2 __attribute__((target("avx2")))

COMPACTON_AVX2 inline double hsum(__m256d v) {
  // Fixed lane order: ((l0 + l1) + (l2 + l3)).
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

COMPACTON_AVX2 void stiffness_parts_avx2(Layout l, const double* u, const double* outer,
                                         const double* inner, double inv_hz2, double* out_z,
                                         double* out_r) {
  const int s = l.stride();
  const __m256d vinv = _mm256_set1_pd(inv_hz2);
  for (int i = 0; i < l.nz; ++i) {
    const double* row = u + static_cast<long>(i) * s;
    const double* up = u + static_cast<long>((i + 1) % l.nz) * s;
    const double* dn = u + static_cast<long>((i + l.nz - 1) % l.nz) * s;
    double* oz = out_z + static_cast<long>(i) * s;
    double* orr = out_r + static_cast<long>(i) * s;
    oz[0] = ((row[0] + row[0]) - up[0] - dn[0]) * inv_hz2;
    orr[0] = outer[0] * row[0] - outer[0] * row[1];
    int j = 1;
    for (; j + 4 <= l.nr; j += 4) {
      const __m256d c = _mm256_loadu_pd(row + j);
      const __m256d cu = _mm256_loadu_pd(up + j);
      const __m256d cd = _mm256_loadu_pd(dn + j);
      const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_sub_pd(_mm256_add_pd(c, c), cu), cd), vinv);
      _mm256_storeu_pd(oz + j, z);

      const __m256d o = _mm256_loadu_pd(outer + j);
      const __m256d n = _mm256_loadu_pd(inner + j);
      const __m256d right = _mm256_loadu_pd(row + j + 1);
      const __m256d left = _mm256_loadu_pd(row + j - 1);
      __m256d r = _mm256_mul_pd(_mm256_add_pd(o, n), c);
      r = _mm256_sub_pd(r, _mm256_mul_pd(o, right));
      r = _mm256_sub_pd(r, _mm256_mul_pd(n, left));
      _mm256_storeu_pd(orr + j, r);
    }
    for (; j < l.nr; ++j) {
      oz[j] = ((row[j] + row[j]) - up[j] - dn[j]) * inv_hz2;
      orr[j] = (outer[j] + inner[j]) * row[j] - outer[j] * row[j + 1] - inner[j] * row[j - 1];
    }
    oz[l.nr] = 0.0;
    orr[l.nr] = 0.0;
  }
}

COMPACTON_AVX2 void gradient_energy_avx2(Layout l, const double* u, const double* w,
                                         const double* m, double* sum_z, double* sum_r) {
  const int s = l.stride();
  __m256d acc_z = _mm256_setzero_pd();
  __m256d acc_r = _mm256_setzero_pd();
  double tail_z = 0.0;
  double tail_r = 0.0;
  for (int i = 0; i < l.nz; ++i) {
    const double* row = u + static_cast<long>(i) * s;
    const double* up = u + static_cast<long>((i + 1) % l.nz) * s;
    int j = 0;
    for (; j + 4 <= l.nr + 1; j += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(up + j), _mm256_loadu_pd(row + j));
      acc_z = _mm256_add_pd(acc_z, _mm256_mul_pd(_mm256_loadu_pd(w + j), _mm256_mul_pd(d, d)));
    }
    for (; j <= l.nr; ++j) {
      const double d = up[j] - row[j];
      tail_z += w[j] * (d * d);
    }
    j = 0;
    for (; j + 4 <= l.nr; j += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(row + j + 1), _mm256_loadu_pd(row + j));
      acc_r = _mm256_add_pd(acc_r, _mm256_mul_pd(_mm256_loadu_pd(m + j), _mm256_mul_pd(d, d)));
    }
    for (; j < l.nr; ++j) {
      const double d = row[j + 1] - row[j];
      tail_r += m[j] * (d * d);
    }
  }
  *sum_z = hsum(acc_z) + tail_z;
  *sum_r = hsum(acc_r) + tail_r;
}

COMPACTON_AVX2 double weighted_dot_avx2(Layout l, const double* a, const double* b,
                                        const double* w) {
  const int s = l.stride();
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  for (int i = 0; i < l.nz; ++i) {
    const double* ra = a + static_cast<long>(i) * s;
    const double* rb = b + static_cast<long>(i) * s;
    int j = 0;
    for (; j + 4 <= l.nr + 1; j += 4) {
      const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(ra + j), _mm256_loadu_pd(rb + j));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + j), prod));
    }
    for (; j <= l.nr; ++j) tail += w[j] * (ra[j] * rb[j]);
  }
  return hsum(acc) + tail;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::avx2, "avx2", &stiffness_parts_avx2, &gradient_energy_avx2,
                                 &weighted_dot_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace compacton::kernels
