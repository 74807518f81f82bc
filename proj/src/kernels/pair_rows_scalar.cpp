#include "kernels/pair_rows.hpp"

namespace landau::kernels {

double projection_row_scalar(const PairRow& r) {
  const double zyz = r.zy * r.zy + r.zz * r.zz;
  double acc = 0.0;
  for (int i = 0; i < r.n; ++i) {
    const double dx = r.tx - r.sx[i];
    const double dy = r.ty - r.sy[i];
    const double dz = r.tz - r.sz[i];
    const double zx = r.zx[i];
    const double r2 = zx * zx + zyz;
    const double zd = zx * dx + r.zy * dy + r.zz * dz;
    const double q = r2 * (dx * dx + dy * dy + dz * dz) - zd * zd;
    acc += r.f[i] * r.power[i] * q;
  }
  return acc;
}

double crossform_row_scalar(const PairRow& r) {
  double acc = 0.0;
  for (int i = 0; i < r.n; ++i) {
    const double dx = r.tx - r.sx[i];
    const double dy = r.ty - r.sy[i];
    const double dz = r.tz - r.sz[i];
    const double zx = r.zx[i];
    const double r12 = zx * dy - r.zy * dx;
    const double r13 = zx * dz - r.zz * dx;
    const double r23 = r.zy * dz - r.zz * dy;
    acc += r.f[i] * r.power[i] * (r12 * r12 + r13 * r13 + r23 * r23);
  }
  return acc;
}

void flux_row_scalar(const PairRow& r, double* out) {
  const double zyz = r.zy * r.zy + r.zz * r.zz;
  double jx = 0.0, jy = 0.0, jz = 0.0;
  for (int i = 0; i < r.n; ++i) {
    const double dx = r.tx - r.sx[i];
    const double dy = r.ty - r.sy[i];
    const double dz = r.tz - r.sz[i];
    const double zx = r.zx[i];
    const double r2 = zx * zx + zyz;
    const double zd = zx * dx + r.zy * dy + r.zz * dz;
    const double c = r.f[i] * r.power[i];
    jx += c * (r2 * dx - zx * zd);
    jy += c * (r2 * dy - r.zy * zd);
    jz += c * (r2 * dz - r.zz * zd);
  }
  out[0] += jx;
  out[1] += jy;
  out[2] += jz;
}

}  // namespace landau::kernels
