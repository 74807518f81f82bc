#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "landau/distribution.hpp"
#include "landau/grid.hpp"

namespace landau {

/// Aperiodic lattice convolution out_k = sum_{l != k} K(v_k - v_l) g_l via
/// zero-padded real FFTs of size (2N)^3.
class FftConvolver {
 public:
  using Spectrum = std::vector<std::complex<double>>;

  explicit FftConvolver(const VelocityGrid& grid);
  ~FftConvolver();
  FftConvolver(const FftConvolver&) = delete;
  FftConvolver& operator=(const FftConvolver&) = delete;

  const VelocityGrid& grid() const noexcept { return grid_; }

  /// Spectrum of K sampled at every lattice offset; the zero offset is
  /// set to 0 so the diagonal k = l is excluded.
  Spectrum kernel_spectrum(const std::function<double(const Vec3&)>& kernel) const;
  Spectrum forward(std::span<const double> field) const;
  /// Inverse transform restricted to the original N^3 block.
  std::vector<double> inverse(const Spectrum& spectrum) const;
  std::vector<double> convolve(const Spectrum& kernel, std::span<const double> field) const;

  static void multiply_accumulate(Spectrum& out, const Spectrum& a, const Spectrum& b);

 private:
  VelocityGrid grid_;
  int m_;
  std::size_t real_size_;
  std::size_t complex_size_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Landau flux through FFT convolutions; same contract as pair_flux.
class FftFluxEngine {
 public:
  FftFluxEngine(const VelocityGrid& grid, double gamma);

  const VelocityGrid& grid() const noexcept { return conv_.grid(); }
  double gamma() const noexcept { return gamma_; }

  VectorField flux(const GridDistribution& f) const;

 private:
  FftConvolver conv_;
  double gamma_;
  std::array<FftConvolver::Spectrum, 6> kernel_;  // a11 a12 a13 a22 a23 a33
};

}  // namespace landau

namespace landau {

/// Shared, cached engine for (grid, gamma).
std::shared_ptr<const FftFluxEngine> flux_engine(const VelocityGrid& grid, double gamma);

}  // namespace landau
