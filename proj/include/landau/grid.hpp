#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace landau {

using Vec3 = std::array<double, 3>;

/// Three scalar fields stored side by side (structure of arrays).
struct VectorField {
  std::vector<double> x, y, z;

  VectorField() = default;
  explicit VectorField(std::size_t n) : x(n, 0.0), y(n, 0.0), z(n, 0.0) {}

  std::size_t size() const noexcept { return x.size(); }
  std::vector<double>& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  const std::vector<double>& operator[](int axis) const {
    return axis == 0 ? x : (axis == 1 ? y : z);
  }
};

/// Truncated uniform lattice on [-L, L]^3 with N points per axis.
///
/// Node (i, j, k) sits at (-L + i h, -L + j h, -L + k h) with h = 2L / (N - 1)
/// and carries the quadrature weight h^3. Linear node index is
/// i + N (j + N k), so the first velocity component runs fastest.
class VelocityGrid {
 public:
  VelocityGrid(double half_extent, int points_per_axis);

  double half_extent() const noexcept { return half_extent_; }
  int points_per_axis() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double weight() const noexcept { return weight_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_ * n_; }

  double coordinate(int i) const noexcept { return coords_[static_cast<std::size_t>(i)]; }
  std::span<const double> coordinates() const noexcept { return coords_; }

  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_) * k);
  }
  std::array<int, 3> unravel(std::size_t idx) const noexcept {
    const int i = static_cast<int>(idx % n_);
    const int j = static_cast<int>((idx / n_) % n_);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
    return {i, j, k};
  }
  Vec3 node(std::size_t idx) const noexcept {
    const auto [i, j, k] = unravel(idx);
    return {coords_[i], coords_[j], coords_[k]};
  }
  bool is_interior(std::size_t idx) const noexcept {
    const auto [i, j, k] = unravel(idx);
    return i > 0 && j > 0 && k > 0 && i < n_ - 1 && j < n_ - 1 && k < n_ - 1;
  }

  bool operator==(const VelocityGrid& other) const noexcept {
    return n_ == other.n_ && half_extent_ == other.half_extent_;
  }

 private:
  double half_extent_;
  int n_;
  double h_;
  double weight_;
  std::vector<double> coords_;
};

VelocityGrid build_grid(double half_extent, int points_per_axis);

/// Midpoint-rule quadrature sum w * sum_k values[k]. Throws NumericError
/// naming the first non-finite node.
double integrate(const VelocityGrid& grid, std::span<const double> values);

/// Evaluates fn at every node.
template <class Fn>
std::vector<double> sample(const VelocityGrid& grid, Fn&& fn) {
  std::vector<double> out(grid.size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = fn(grid.node(idx));
  return out;
}

/// Second-order finite-difference gradient: central on interior nodes,
/// one-sided three-point stencils on the faces. Exact on quadratics.
VectorField gradient(const VelocityGrid& grid, std::span<const double> values);

/// Transpose of the gradient operator: returns sum_a D_a^T field_a.
/// Satisfies <gradient(phi), field> = <phi, gradient_transpose(field)> exactly
/// in the unweighted Euclidean inner product.
std::vector<double> gradient_transpose(const VelocityGrid& grid, const VectorField& field);

}  // namespace landau
