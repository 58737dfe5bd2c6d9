#include <cmath>

#include "risdeploy/cascade.hpp"

namespace risdeploy::kernels {

// For a ground user u and element (i, j):
//   d2^2          = (ux - col_x[i])^2 + (uy - row_y[j])^2 + row_z[j]^2
//   cos(theta_r)  = c_j / d2,  c_j = n . (u - p_j)
//   sqrt(F_r)/d2  = c_j^(e/2) * (d2^2)^(-(e+2)/4)
double cascade_amplitude_scalar(const CascadeTables& t, GroundPoint user) {
  const bool cubic = t.exponent == 3.0;
  const double half_exp = t.exponent / 2.0;
  const double dist_exp = -(t.exponent + 2.0) / 4.0;

  double total = 0.0;
  for (std::size_t j = 0; j < t.n_rows; ++j) {
    const double vy = user.y - t.row_y[j];
    const double vz = -t.row_z[j];
    const double c = t.normal_y * vy + t.normal_z * vz;
    if (!(c > 0.0)) continue;
    const double row_term = vy * vy + vz * vz;

    const double* w = t.bs_weight.data() + j * t.n_cols;
    double row_sum = 0.0;
    if (cubic) {
      for (std::size_t i = 0; i < t.n_cols; ++i) {
        const double dx = user.x - t.col_x[i];
        const double s = std::fma(dx, dx, row_term);
        row_sum += w[i] / (s * std::sqrt(std::sqrt(s)));
      }
      total += c * std::sqrt(c) * row_sum;
    } else {
      for (std::size_t i = 0; i < t.n_cols; ++i) {
        const double dx = user.x - t.col_x[i];
        const double s = std::fma(dx, dx, row_term);
        row_sum += w[i] * std::pow(s, dist_exp);
      }
      total += std::pow(c, half_exp) * row_sum;
    }
  }
  return total;
}

}  // namespace risdeploy::kernels
