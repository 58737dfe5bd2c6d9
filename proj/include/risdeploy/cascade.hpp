#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "risdeploy/geometry.hpp"
#include "risdeploy/scene.hpp"

namespace risdeploy {

// Per-configuration tables for the coherent cascade amplitude
//
//   A(user) = sum_n sqrt(F(theta_i,n) F(theta_r,n)) / (d1,n d2,n).
//
// The lattice is separable: element x depends only on the column i and
// (y, z) only on the row j, so for a ground user the squared element
// distance is (ux - col_x[i])^2 + row_term(j) and the reflection cosine
// depends on j alone. The BS-side factor sqrt(F_i) / d1 is precomputed.
struct CascadeTables {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> col_x;      // n_cols
  std::vector<double> row_y;      // n_rows
  std::vector<double> row_z;      // n_rows
  std::vector<double> bs_weight;  // n_rows * n_cols, row-major by j
  double normal_y = 0.0;
  double normal_z = 0.0;
  double exponent = 3.0;
};

CascadeTables make_cascade_tables(const ElementLattice& lattice, const Vec3& bs);

enum class KernelIsa { Scalar, Avx2, Avx512 };

std::string_view kernel_name(KernelIsa isa);

// Widest ISA built in and supported by this CPU. RISDEPLOY_KERNEL
// (scalar | avx2 | avx512) caps the choice.
KernelIsa preferred_kernel();
bool kernel_available(KernelIsa isa);

// Variants available on this build and CPU, scalar first.
std::vector<KernelIsa> available_kernels();

namespace kernels {

double cascade_amplitude_scalar(const CascadeTables& tables, GroundPoint user);
// SIMD variants: exponent 3 only, CPU support checked by the caller.
double cascade_amplitude_avx2(const CascadeTables& tables, GroundPoint user);
double cascade_amplitude_avx512(const CascadeTables& tables, GroundPoint user);

}  // namespace kernels

// Dispatches to the requested ISA; falls back to scalar when the variant
// does not cover the table's pattern exponent or the CPU lacks support.
double cascade_amplitude(const CascadeTables& tables, GroundPoint user, KernelIsa isa);

}  // namespace risdeploy
