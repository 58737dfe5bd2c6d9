// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
//
// The per-element factor s^(-5/4) is built from two reciprocal square
// roots, y = s^(-1/2) and z = (s y)^(-1/2) = s^(-1/4), so that
// s^(-5/4) = y^2 z. Each root starts from the 12-bit float estimate and
// takes two Newton steps in double, keeping the divider unit idle.

#include <immintrin.h>

#include <cmath>

#include "risdeploy/cascade.hpp"

namespace risdeploy::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d rsqrt_refined(__m256d u) {
  const __m256d three_halves = _mm256_set1_pd(1.5);
  const __m256d half_u = _mm256_mul_pd(_mm256_set1_pd(0.5), u);
  __m256d y = _mm256_cvtps_pd(_mm_rsqrt_ps(_mm256_cvtpd_ps(u)));
  y = _mm256_mul_pd(y, _mm256_fnmadd_pd(half_u, _mm256_mul_pd(y, y), three_halves));
  y = _mm256_mul_pd(y, _mm256_fnmadd_pd(half_u, _mm256_mul_pd(y, y), three_halves));
  return y;
}

}  // namespace

double cascade_amplitude_avx2(const CascadeTables& t, GroundPoint user) {
  const std::size_t n = t.n_cols;
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d ux = _mm256_set1_pd(user.x);

  double total = 0.0;
  for (std::size_t j = 0; j < t.n_rows; ++j) {
    const double vy = user.y - t.row_y[j];
    const double vz = -t.row_z[j];
    const double c = t.normal_y * vy + t.normal_z * vz;
    if (!(c > 0.0)) continue;
    const double row_term = vy * vy + vz * vz;
    const __m256d rt = _mm256_set1_pd(row_term);

    const double* w = t.bs_weight.data() + j * n;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
      const __m256d dx = _mm256_sub_pd(ux, _mm256_loadu_pd(t.col_x.data() + i));
      const __m256d s = _mm256_fmadd_pd(dx, dx, rt);
      const __m256d y = rsqrt_refined(s);
      const __m256d z = rsqrt_refined(_mm256_mul_pd(s, y));
      const __m256d wy2 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(y, y));
      acc = _mm256_fmadd_pd(wy2, z, acc);
    }
    double row_sum = hsum(acc);
    for (std::size_t i = n4; i < n; ++i) {
      const double dx = user.x - t.col_x[i];
      const double s = std::fma(dx, dx, row_term);
      row_sum += w[i] / (s * std::sqrt(std::sqrt(s)));
    }
    total += c * std::sqrt(c) * row_sum;
  }
  return total;
}

}  // namespace risdeploy::kernels
