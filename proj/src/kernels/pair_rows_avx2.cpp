#include <immintrin.h>

#include "kernels/pair_rows.hpp"

namespace landau::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double projection_row_avx2(const PairRow& r) {
  const __m256d tx = _mm256_set1_pd(r.tx);
  const __m256d ty = _mm256_set1_pd(r.ty);
  const __m256d tz = _mm256_set1_pd(r.tz);
  const __m256d zy = _mm256_set1_pd(r.zy);
  const __m256d zz = _mm256_set1_pd(r.zz);
  const double zyz_s = r.zy * r.zy + r.zz * r.zz;
  const __m256d zyz = _mm256_set1_pd(zyz_s);
  __m256d acc = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= r.n; i += 4) {
    const __m256d dx = _mm256_sub_pd(tx, _mm256_loadu_pd(r.sx + i));
    const __m256d dy = _mm256_sub_pd(ty, _mm256_loadu_pd(r.sy + i));
    const __m256d dz = _mm256_sub_pd(tz, _mm256_loadu_pd(r.sz + i));
    const __m256d zx = _mm256_loadu_pd(r.zx + i);
    const __m256d r2 = _mm256_fmadd_pd(zx, zx, zyz);
    __m256d zd = _mm256_mul_pd(zx, dx);
    zd = _mm256_fmadd_pd(zy, dy, zd);
    zd = _mm256_fmadd_pd(zz, dz, zd);
    __m256d d2 = _mm256_mul_pd(dx, dx);
    d2 = _mm256_fmadd_pd(dy, dy, d2);
    d2 = _mm256_fmadd_pd(dz, dz, d2);
    const __m256d q = _mm256_fmsub_pd(r2, d2, _mm256_mul_pd(zd, zd));
    const __m256d fw = _mm256_mul_pd(_mm256_loadu_pd(r.f + i), _mm256_loadu_pd(r.power + i));
    acc = _mm256_fmadd_pd(fw, q, acc);
  }
  double tail = 0.0;
  for (; i < r.n; ++i) {
    const double dx = r.tx - r.sx[i];
    const double dy = r.ty - r.sy[i];
    const double dz = r.tz - r.sz[i];
    const double zx = r.zx[i];
    const double r2 = zx * zx + zyz_s;
    const double zd = zx * dx + r.zy * dy + r.zz * dz;
    tail += r.f[i] * r.power[i] * (r2 * (dx * dx + dy * dy + dz * dz) - zd * zd);
  }
  return hsum(acc) + tail;
}

double crossform_row_avx2(const PairRow& r) {
  const __m256d tx = _mm256_set1_pd(r.tx);
  const __m256d ty = _mm256_set1_pd(r.ty);
  const __m256d tz = _mm256_set1_pd(r.tz);
  const __m256d zy = _mm256_set1_pd(r.zy);
  const __m256d zz = _mm256_set1_pd(r.zz);
  __m256d acc = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= r.n; i += 4) {
    const __m256d dx = _mm256_sub_pd(tx, _mm256_loadu_pd(r.sx + i));
    const __m256d dy = _mm256_sub_pd(ty, _mm256_loadu_pd(r.sy + i));
    const __m256d dz = _mm256_sub_pd(tz, _mm256_loadu_pd(r.sz + i));
    const __m256d zx = _mm256_loadu_pd(r.zx + i);
    const __m256d r12 = _mm256_fmsub_pd(zx, dy, _mm256_mul_pd(zy, dx));
    const __m256d r13 = _mm256_fmsub_pd(zx, dz, _mm256_mul_pd(zz, dx));
    const __m256d r23 = _mm256_fmsub_pd(zy, dz, _mm256_mul_pd(zz, dy));
    __m256d s = _mm256_mul_pd(r12, r12);
    s = _mm256_fmadd_pd(r13, r13, s);
    s = _mm256_fmadd_pd(r23, r23, s);
    const __m256d fw = _mm256_mul_pd(_mm256_loadu_pd(r.f + i), _mm256_loadu_pd(r.power + i));
    acc = _mm256_fmadd_pd(fw, s, acc);
  }
  double tail = 0.0;
  for (; i < r.n; ++i) {
    const double dx = r.tx - r.sx[i];
    const double dy = r.ty - r.sy[i];
    const double dz = r.tz - r.sz[i];
    const double zx = r.zx[i];
    const double r12 = zx * dy - r.zy * dx;
    const double r13 = zx * dz - r.zz * dx;
    const double r23 = r.zy * dz - r.zz * dy;
    tail += r.f[i] * r.power[i] * (r12 * r12 + r13 * r13 + r23 * r23);
  }
  return hsum(acc) + tail;
}

void flux_row_avx2(const PairRow& r, double* out) {
  const __m256d tx = _mm256_set1_pd(r.tx);
  const __m256d ty = _mm256_set1_pd(r.ty);
  const __m256d tz = _mm256_set1_pd(r.tz);
  const __m256d zy = _mm256_set1_pd(r.zy);
  const __m256d zz = _mm256_set1_pd(r.zz);
  const double zyz_s = r.zy * r.zy + r.zz * r.zz;
  const __m256d zyz = _mm256_set1_pd(zyz_s);
  __m256d jx = _mm256_setzero_pd();
  __m256d jy = _mm256_setzero_pd();
  __m256d jz = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= r.n; i += 4) {
    const __m256d dx = _mm256_sub_pd(tx, _mm256_loadu_pd(r.sx + i));
    const __m256d dy = _mm256_sub_pd(ty, _mm256_loadu_pd(r.sy + i));
    const __m256d dz = _mm256_sub_pd(tz, _mm256_loadu_pd(r.sz + i));
    const __m256d zx = _mm256_loadu_pd(r.zx + i);
    const __m256d r2 = _mm256_fmadd_pd(zx, zx, zyz);
    __m256d zd = _mm256_mul_pd(zx, dx);
    zd = _mm256_fmadd_pd(zy, dy, zd);
    zd = _mm256_fmadd_pd(zz, dz, zd);
    const __m256d c = _mm256_mul_pd(_mm256_loadu_pd(r.f + i), _mm256_loadu_pd(r.power + i));
    jx = _mm256_fmadd_pd(c, _mm256_fmsub_pd(r2, dx, _mm256_mul_pd(zx, zd)), jx);
    jy = _mm256_fmadd_pd(c, _mm256_fmsub_pd(r2, dy, _mm256_mul_pd(zy, zd)), jy);
    jz = _mm256_fmadd_pd(c, _mm256_fmsub_pd(r2, dz, _mm256_mul_pd(zz, zd)), jz);
  }
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (; i < r.n; ++i) {
    const double dx = r.tx - r.sx[i];
    const double dy = r.ty - r.sy[i];
    const double dz = r.tz - r.sz[i];
    const double zx = r.zx[i];
    const double r2 = zx * zx + zyz_s;
    const double zd = zx * dx + r.zy * dy + r.zz * dz;
    const double c = r.f[i] * r.power[i];
    sx += c * (r2 * dx - zx * zd);
    sy += c * (r2 * dy - r.zy * zd);
    sz += c * (r2 * dz - r.zz * zd);
  }
  out[0] += hsum(jx) + sx;
  out[1] += hsum(jy) + sy;
  out[2] += hsum(jz) + sz;
}

}  // namespace landau::kernels
