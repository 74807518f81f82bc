#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

/// Throws ConfigError unless gamma lies in (-4, 0].
void validate_gamma(double gamma);

/// a(z) = |z|^{gamma+2} (Id - z z^T / |z|^2), the Landau diffusion matrix.
std::array<std::array<double, 3>, 3> landau_matrix(const Vec3& z, double gamma);
/// b(z) = -2 |z|^gamma z (row divergence of a).
Vec3 landau_drift(const Vec3& z, double gamma);
/// c(z) = -2 (gamma + 3) |z|^gamma for z != 0 (divergence of b away from the origin).
double landau_divergence(const Vec3& z, double gamma);

/// |z|^gamma at every lattice offset z = (k - l) h.
///
/// Pair kernels rebuild a(z) x = |z|^gamma (|z|^2 x - z (z . x)) from this
/// table and the offset itself, so one array serves every pair sum.
/// The x-axis is stored reversed so that, for a fixed target node k and a
/// source row (l_y, l_z), the entries for l_x = 0..N-1 are contiguous and
/// ascending. The zero offset holds 0, which removes the diagonal k = l
/// from all pair sums.
class PairKernelTable {
 public:
  PairKernelTable(const VelocityGrid& grid, double gamma);

  int points_per_axis() const noexcept { return n_; }
  double gamma() const noexcept { return gamma_; }

  const double* power() const noexcept { return power_.data(); }

  /// Offset of the row for target x-index kx and offsets dy = ky - ly, dz = kz - lz.
  std::size_t row_base(int kx, int dy, int dz) const noexcept {
    const std::size_t e = static_cast<std::size_t>(2 * n_ - 1);
    return (static_cast<std::size_t>(dz + n_ - 1) * e + static_cast<std::size_t>(dy + n_ - 1)) * e +
           static_cast<std::size_t>(n_ - 1 - kx);
  }
  /// Row of (kx - lx) h for lx = 0..N-1.
  const double* zx_row(int kx) const noexcept { return zx_.data() + (n_ - 1 - kx); }

 private:
  int n_;
  double gamma_;
  std::vector<double> power_;
  std::vector<double> zx_;
};

/// Shared, cached table for (grid, gamma).
std::shared_ptr<const PairKernelTable> kernel_table(const VelocityGrid& grid, double gamma);

}  // namespace landau
