// Compiled with -mavx512f -mfma; only reached after a runtime CPU check.
// Same factorization as the AVX2 variant, seeded by the 14-bit rsqrt14.

#include <immintrin.h>

#include <cmath>

#include "risdeploy/cascade.hpp"

namespace risdeploy::kernels {

namespace {

inline __m512d rsqrt_refined(__m512d u) {
  const __m512d three_halves = _mm512_set1_pd(1.5);
  const __m512d half_u = _mm512_mul_pd(_mm512_set1_pd(0.5), u);
  __m512d y = _mm512_rsqrt14_pd(u);
  y = _mm512_mul_pd(y, _mm512_fnmadd_pd(half_u, _mm512_mul_pd(y, y), three_halves));
  y = _mm512_mul_pd(y, _mm512_fnmadd_pd(half_u, _mm512_mul_pd(y, y), three_halves));
  return y;
}

}  // namespace

double cascade_amplitude_avx512(const CascadeTables& t, GroundPoint user) {
  const std::size_t n = t.n_cols;
  const std::size_t n8 = n & ~std::size_t{7};
  const __m512d ux = _mm512_set1_pd(user.x);

  double total = 0.0;
  for (std::size_t j = 0; j < t.n_rows; ++j) {
    const double vy = user.y - t.row_y[j];
    const double vz = -t.row_z[j];
    const double c = t.normal_y * vy + t.normal_z * vz;
    if (!(c > 0.0)) continue;
    const double row_term = vy * vy + vz * vz;
    const __m512d rt = _mm512_set1_pd(row_term);

    const double* w = t.bs_weight.data() + j * n;
    __m512d acc = _mm512_setzero_pd();
    for (std::size_t i = 0; i < n8; i += 8) {
      const __m512d dx = _mm512_sub_pd(ux, _mm512_loadu_pd(t.col_x.data() + i));
      const __m512d s = _mm512_fmadd_pd(dx, dx, rt);
      const __m512d y = rsqrt_refined(s);
      const __m512d z = rsqrt_refined(_mm512_mul_pd(s, y));
      const __m512d wy2 = _mm512_mul_pd(_mm512_loadu_pd(w + i), _mm512_mul_pd(y, y));
      acc = _mm512_fmadd_pd(wy2, z, acc);
    }
    double row_sum = _mm512_reduce_add_pd(acc);
    for (std::size_t i = n8; i < n; ++i) {
      const double dx = user.x - t.col_x[i];
      const double s = std::fma(dx, dx, row_term);
      row_sum += w[i] / (s * std::sqrt(std::sqrt(s)));
    }
    total += c * std::sqrt(c) * row_sum;
  }
  return total;
}

}  // namespace risdeploy::kernels
