#include "landau/pair_sums.hpp"

#include "kernels/pair_rows.hpp"
#include "landau/error.hpp"
#include "landau/parallel.hpp"

namespace landau {

namespace {

template <class RowFn>
double line_sum(const GridDistribution& f, const PairKernelTable& table, RowFn row_fn) {
  const VelocityGrid& grid = f.grid();
  if (table.points_per_axis() != grid.points_per_axis()) throw ConfigError("kernel table does not match grid");
  const int n = grid.points_per_axis();
  const auto& s = f.score();
  const double* fv = f.data().data();
  const std::size_t nn = static_cast<std::size_t>(n);
  const double h = grid.spacing();
  const double total = parallel_block_sum(nn * nn, [&](std::size_t line) {
    const int ky = static_cast<int>(line % nn);
    const int kz = static_cast<int>(line / nn);
    double line_acc = 0.0;
    for (int kx = 0; kx < n; ++kx) {
      const std::size_t k = grid.index(kx, ky, kz);
      const double fk = fv[k];
      if (fk == 0.0) continue;
      kernels::PairRow r{};
      r.n = n;
      r.tx = s.x[k];
      r.ty = s.y[k];
      r.tz = s.z[k];
      r.zx = table.zx_row(kx);
      double acc = 0.0;
      for (int lz = 0; lz < n; ++lz) {
        r.zz = (kz - lz) * h;
        for (int ly = 0; ly < n; ++ly) {
          const std::size_t lbase = grid.index(0, ly, lz);
          const std::size_t tb = table.row_base(kx, ky - ly, kz - lz);
          r.zy = (ky - ly) * h;
          r.f = fv + lbase;
          r.sx = s.x.data() + lbase;
          r.sy = s.y.data() + lbase;
          r.sz = s.z.data() + lbase;
          r.power = table.power() + tb;
          acc += row_fn(r);
        }
      }
      line_acc += fk * acc;
    }
    return line_acc;
  });
  const double w = grid.weight();
  return 0.5 * w * w * total;
}

}  // namespace

double pair_projection_sum(const GridDistribution& f, const PairKernelTable& table) {
  return line_sum(f, table, kernels::active_row_kernels().projection);
}

double pair_crossform_sum(const GridDistribution& f, const PairKernelTable& table) {
  return line_sum(f, table, kernels::active_row_kernels().crossform);
}

VectorField pair_flux(const GridDistribution& f, const PairKernelTable& table) {
  const VelocityGrid& grid = f.grid();
  if (table.points_per_axis() != grid.points_per_axis()) throw ConfigError("kernel table does not match grid");
  const int n = grid.points_per_axis();
  const std::size_t nn = static_cast<std::size_t>(n);
  const auto& s = f.score();
  const double* fv = f.data().data();
  const double w = grid.weight();
  const double h = grid.spacing();
  const auto flux_row = kernels::active_row_kernels().flux;
  VectorField out(grid.size());
  parallel_for(nn * nn, [&](std::size_t line) {
    const int ky = static_cast<int>(line % nn);
    const int kz = static_cast<int>(line / nn);
    for (int kx = 0; kx < n; ++kx) {
      const std::size_t k = grid.index(kx, ky, kz);
      const double fk = fv[k];
      if (fk == 0.0) continue;
      kernels::PairRow r{};
      r.n = n;
      r.tx = s.x[k];
      r.ty = s.y[k];
      r.tz = s.z[k];
      r.zx = table.zx_row(kx);
      double acc[3] = {0.0, 0.0, 0.0};
      for (int lz = 0; lz < n; ++lz) {
        r.zz = (kz - lz) * h;
        for (int ly = 0; ly < n; ++ly) {
          const std::size_t lbase = grid.index(0, ly, lz);
          const std::size_t tb = table.row_base(kx, ky - ly, kz - lz);
          r.f = fv + lbase;
          r.sx = s.x.data() + lbase;
          r.sy = s.y.data() + lbase;
          r.sz = s.z.data() + lbase;
          r.zy = (ky - ly) * h;
          r.power = table.power() + tb;
          flux_row(r, acc);
        }
      }
      out.x[k] = w * fk * acc[0];
      out.y[k] = w * fk * acc[1];
      out.z[k] = w * fk * acc[2];
    }
  });
  return out;
}

}  // namespace landau
