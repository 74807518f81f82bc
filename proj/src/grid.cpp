#include "landau/grid.hpp"

#include <cmath>
#include <sstream>

#include "landau/error.hpp"
#include "landau/parallel.hpp"

namespace landau {

VelocityGrid::VelocityGrid(double half_extent, int points_per_axis)
    : half_extent_(half_extent), n_(points_per_axis) {
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw ConfigError("grid half extent L must be positive and finite, got " + std::to_string(half_extent));
  }
  if (points_per_axis < 8) {
    throw ConfigError("grid needs at least 8 points per axis, got " + std::to_string(points_per_axis));
  }
  h_ = 2.0 * half_extent / (points_per_axis - 1);
  weight_ = h_ * h_ * h_;
  coords_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) coords_[static_cast<std::size_t>(i)] = -half_extent + i * h_;
}

VelocityGrid build_grid(double half_extent, int points_per_axis) {
  return VelocityGrid(half_extent, points_per_axis);
}

double integrate(const VelocityGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw ConfigError("field size does not match grid");
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    if (!std::isfinite(values[idx])) {
      const auto [i, j, k] = grid.unravel(idx);
      std::ostringstream msg;
      msg << "non-finite value " << values[idx] << " at node (" << i << ", " << j << ", " << k << ")";
      throw NumericError(msg.str());
    }
  }
  return grid.weight() * pairwise_sum(values);
}

namespace {

// Visits every grid line along `axis`: fn(base, stride) where the line's
// nodes are base + m * stride for m = 0..N-1.
template <class Fn>
void for_each_line(const VelocityGrid& grid, int axis, Fn&& fn) {
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
  const std::size_t strides[3] = {1, n, n * n};
  const std::size_t stride = strides[axis];
  const std::size_t s1 = strides[(axis + 1) % 3];
  const std::size_t s2 = strides[(axis + 2) % 3];
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) fn(a * s1 + b * s2, stride);
  }
}

}  // namespace

VectorField gradient(const VelocityGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw ConfigError("field size does not match grid");
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
  const double inv2h = 0.5 / grid.spacing();
  VectorField out(grid.size());
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double>& g = out[axis];
    for_each_line(grid, axis, [&](std::size_t base, std::size_t stride) {
      auto f = [&](std::size_t m) { return values[base + m * stride]; };
      g[base] = (-3.0 * f(0) + 4.0 * f(1) - f(2)) * inv2h;
      for (std::size_t m = 1; m + 1 < n; ++m) g[base + m * stride] = (f(m + 1) - f(m - 1)) * inv2h;
      g[base + (n - 1) * stride] = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) * inv2h;
    });
  }
  return out;
}

std::vector<double> gradient_transpose(const VelocityGrid& grid, const VectorField& field) {
  if (field.size() != grid.size()) throw ConfigError("field size does not match grid");
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
  const double inv2h = 0.5 / grid.spacing();
  std::vector<double> out(grid.size(), 0.0);
  for (int axis = 0; axis < 3; ++axis) {
    const std::vector<double>& g = field[axis];
    for_each_line(grid, axis, [&](std::size_t base, std::size_t stride) {
      auto at = [&](std::size_t m) -> double& { return out[base + m * stride]; };
      auto gm = [&](std::size_t m) { return g[base + m * stride] * inv2h; };
      const double g0 = gm(0);
      at(0) -= 3.0 * g0;
      at(1) += 4.0 * g0;
      at(2) -= g0;
      for (std::size_t m = 1; m + 1 < n; ++m) {
        const double gi = gm(m);
        at(m + 1) += gi;
        at(m - 1) -= gi;
      }
      const double gl = gm(n - 1);
      at(n - 1) += 3.0 * gl;
      at(n - 2) -= 4.0 * gl;
      at(n - 3) += gl;
    });
  }
  return out;
}

}  // namespace landau
