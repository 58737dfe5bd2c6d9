#include "risdeploy/cascade.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace risdeploy {

CascadeTables make_cascade_tables(const ElementLattice& lattice, const Vec3& bs) {
  CascadeTables t;
  t.n_rows = lattice.n_rows;
  t.n_cols = lattice.n_cols;
  t.normal_y = lattice.normal.y;
  t.normal_z = lattice.normal.z;
  t.exponent = lattice.pattern_exponent;

  t.col_x.resize(t.n_cols);
  for (std::size_t i = 0; i < t.n_cols; ++i) t.col_x[i] = lattice.at(i, 0).x;
  t.row_y.resize(t.n_rows);
  t.row_z.resize(t.n_rows);
  for (std::size_t j = 0; j < t.n_rows; ++j) {
    t.row_y[j] = lattice.at(0, j).y;
    t.row_z[j] = lattice.at(0, j).z;
  }

  const double half_exp = t.exponent / 2.0;
  t.bs_weight.resize(t.n_rows * t.n_cols);
  for (std::size_t j = 0; j < t.n_rows; ++j) {
    for (std::size_t i = 0; i < t.n_cols; ++i) {
      const Vec3 v = bs - lattice.at(i, j);
      const double d1 = v.norm();
      const double c = lattice.normal.dot(v) / d1;
      t.bs_weight[j * t.n_cols + i] = c > 0.0 ? std::pow(c, half_exp) / d1 : 0.0;
    }
  }
  return t;
}

std::string_view kernel_name(KernelIsa isa) {
  switch (isa) {
    case KernelIsa::Scalar:
      return "scalar";
    case KernelIsa::Avx2:
      return "avx2";
    case KernelIsa::Avx512:
      return "avx512";
  }
  return "unknown";
}

bool kernel_available(KernelIsa isa) {
  switch (isa) {
    case KernelIsa::Scalar:
      return true;
    case KernelIsa::Avx2:
#if defined(RISDEPLOY_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case KernelIsa::Avx512:
#if defined(RISDEPLOY_HAVE_AVX512)
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::vector<KernelIsa> available_kernels() {
  std::vector<KernelIsa> out;
  for (KernelIsa isa : {KernelIsa::Scalar, KernelIsa::Avx2, KernelIsa::Avx512}) {
    if (kernel_available(isa)) out.push_back(isa);
  }
  return out;
}

KernelIsa preferred_kernel() {
  static const KernelIsa chosen = [] {
    KernelIsa cap = KernelIsa::Avx512;
    if (const char* env = std::getenv("RISDEPLOY_KERNEL")) {
      const std::string v(env);
      if (v == "scalar") cap = KernelIsa::Scalar;
      if (v == "avx2") cap = KernelIsa::Avx2;
    }
    KernelIsa best = KernelIsa::Scalar;
    for (KernelIsa isa : available_kernels()) {
      if (static_cast<int>(isa) <= static_cast<int>(cap)) best = isa;
    }
    return best;
  }();
  return chosen;
}

double cascade_amplitude(const CascadeTables& tables, GroundPoint user, KernelIsa isa) {
  if (tables.exponent == 3.0 && isa != KernelIsa::Scalar && kernel_available(isa)) {
#if defined(RISDEPLOY_HAVE_AVX512)
    if (isa == KernelIsa::Avx512) return kernels::cascade_amplitude_avx512(tables, user);
#endif
#if defined(RISDEPLOY_HAVE_AVX2)
    if (isa == KernelIsa::Avx2) return kernels::cascade_amplitude_avx2(tables, user);
#endif
  }
  return kernels::cascade_amplitude_scalar(tables, user);
}

}  // namespace risdeploy
