#pragma once

#include "landau/simd.hpp"

namespace landau::kernels {

// One source row l_x = 0..n-1 at fixed (l_y, l_z) against one target node k.
// Table rows are indexed by l_x (see PairKernelTable).
struct PairRow {
  int n;
  const double* f;
  const double* sx;
  const double* sy;
  const double* sz;
  double tx, ty, tz;  // score at the target node
  const double* power;  // |z|^gamma, z = v_k - v_l
  const double* zx;     // (k_x - l_x) h
  double zy, zz;
};

// sum_l f_l (t - s_l)^T a(z) (t - s_l), with
// x^T a(z) x = |z|^gamma (|z|^2 |x|^2 - (z . x)^2)
using ProjectionRowFn = double (*)(const PairRow&);
// sum_l f_l |z|^gamma sum_{i<j} R_ij^2
using CrossformRowFn = double (*)(const PairRow&);
// out += sum_l f_l a(z) (t - s_l), a(z) x = |z|^gamma (|z|^2 x - z (z . x))
using FluxRowFn = void (*)(const PairRow&, double* out);

struct RowKernels {
  ProjectionRowFn projection;
  CrossformRowFn crossform;
  FluxRowFn flux;
};

double projection_row_scalar(const PairRow& r);
double crossform_row_scalar(const PairRow& r);
void flux_row_scalar(const PairRow& r, double* out);

double projection_row_avx2(const PairRow& r);
double crossform_row_avx2(const PairRow& r);
void flux_row_avx2(const PairRow& r, double* out);

const RowKernels& row_kernels(SimdLevel level);
inline const RowKernels& active_row_kernels() { return row_kernels(active_simd_level()); }

}  // namespace landau::kernels
