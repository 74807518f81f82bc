#include "landau/kernel_table.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <string>
#include <tuple>

#include "landau/error.hpp"
#include "landau/parallel.hpp"

namespace landau {

void validate_gamma(double gamma) {
  if (!(gamma > -4.0 && gamma <= 0.0)) {
    throw ConfigError("gamma must lie in (-4, 0], got " + std::to_string(gamma));
  }
}

std::array<std::array<double, 3>, 3> landau_matrix(const Vec3& z, double gamma) {
  const double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  std::array<std::array<double, 3>, 3> a{};
  if (r2 == 0.0) return a;
  const double p = std::pow(r2, 0.5 * gamma);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = p * ((i == j ? r2 : 0.0) - z[i] * z[j]);
  return a;
}

Vec3 landau_drift(const Vec3& z, double gamma) {
  const double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  if (r2 == 0.0) return {0.0, 0.0, 0.0};
  const double p = -2.0 * std::pow(r2, 0.5 * gamma);
  return {p * z[0], p * z[1], p * z[2]};
}

double landau_divergence(const Vec3& z, double gamma) {
  const double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  if (r2 == 0.0) return 0.0;
  return -2.0 * (gamma + 3.0) * std::pow(r2, 0.5 * gamma);
}

PairKernelTable::PairKernelTable(const VelocityGrid& grid, double gamma)
    : n_(grid.points_per_axis()), gamma_(gamma) {
  validate_gamma(gamma);
  const int e = 2 * n_ - 1;
  const std::size_t total = static_cast<std::size_t>(e) * e * e;
  power_.assign(total, 0.0);
  const double h = grid.spacing();
  parallel_for(static_cast<std::size_t>(e), [&](std::size_t zslot) {
    const double dz = (static_cast<int>(zslot) - (n_ - 1)) * h;
    for (int yslot = 0; yslot < e; ++yslot) {
      const double dy = (yslot - (n_ - 1)) * h;
      for (int xslot = 0; xslot < e; ++xslot) {
        const double dx = ((n_ - 1) - xslot) * h;
        const double r2 = dx * dx + dy * dy + dz * dz;
        const std::size_t idx = (zslot * e + static_cast<std::size_t>(yslot)) * e + static_cast<std::size_t>(xslot);
        if (r2 == 0.0) continue;
        power_[idx] = std::pow(r2, 0.5 * gamma);
      }
    }
  });
  zx_.resize(static_cast<std::size_t>(e));
  for (int m = 0; m < e; ++m) zx_[static_cast<std::size_t>(m)] = ((n_ - 1) - m) * h;
}

std::shared_ptr<const PairKernelTable> kernel_table(const VelocityGrid& grid, double gamma) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mutex;
  static std::deque<std::pair<Key, std::shared_ptr<const PairKernelTable>>> cache;
  const Key key{grid.points_per_axis(), grid.half_extent(), gamma};
  std::lock_guard<std::mutex> lock(mutex);
  for (const auto& [k, table] : cache)
    if (k == key) return table;
  auto table = std::make_shared<const PairKernelTable>(grid, gamma);
  cache.emplace_back(key, table);
  if (cache.size() > 3) cache.pop_front();
  return table;
}

}  // namespace landau
