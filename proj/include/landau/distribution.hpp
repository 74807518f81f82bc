#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "landau/grid.hpp"

namespace landau {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Positivity floor applied inside logarithms and scores only.
inline constexpr double kDensityFloor = 1e-300;
/// Nodes below this value contribute nothing to entropy-type integrands.
inline constexpr double kEntropyCutoff = 1e-30;

/// Nonnegative density sampled on a grid together with its score field.
///
/// The score is the discrete gradient of log max(f, floor). Using the same
/// gradient operator as the collision operator makes <Q(f), log f> = -D(f)
/// an exact discrete identity, and makes the score of a sampled Maxwellian
/// exactly -(v - u) / T up to roundoff (log of a Gaussian is quadratic).
class GridDistribution {
 public:
  GridDistribution(VelocityGrid grid, std::vector<double> values);

  const VelocityGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& data() const noexcept { return values_; }
  const VectorField& score() const noexcept { return *score_; }
  double operator[](std::size_t idx) const noexcept { return values_[idx]; }
  std::size_t size() const noexcept { return values_.size(); }

  GridDistribution scaled(double factor) const;

 private:
  VelocityGrid grid_;
  std::vector<double> values_;
  std::shared_ptr<const VectorField> score_;
};

VectorField log_score(const VelocityGrid& grid, std::span<const double> values);

struct Maxwellian {
  double density = 1.0;
  Vec3 mean{0.0, 0.0, 0.0};
  double temperature = 1.0;

  double operator()(const Vec3& v) const;
  double log_value(const Vec3& v) const;
};

/// One Gaussian component with per-axis temperatures.
struct GaussianComponent {
  double weight = 1.0;
  Vec3 mean{0.0, 0.0, 0.0};
  Vec3 temperature{1.0, 1.0, 1.0};
};

GridDistribution maxwellian(const VelocityGrid& grid, double density, const Vec3& mean, double temperature);
GridDistribution reduced_maxwellian(const VelocityGrid& grid);

/// Unit-mass centred Gaussian with axis temperatures T1, T2, T3.
GridDistribution anisotropic_gaussian(const VelocityGrid& grid, double t1, double t2, double t3);

/// Unit-mass Gaussian with mean `mean` and covariance `covariance`
/// (must be symmetric positive definite).
GridDistribution covariance_gaussian(const VelocityGrid& grid, const Mat3& covariance, const Vec3& mean);

GridDistribution gaussian_mixture(const VelocityGrid& grid, std::span<const GaussianComponent> components);

/// Affine reparametrisation of mixture parameters so that the continuous
/// mixture has mass 1, zero mean and energy 3.
std::vector<GaussianComponent> normalized_mixture_parameters(std::span<const GaussianComponent> components);

/// Symmetric two-bump mixture (1/2, +-(a,0,0), T) with temperature chosen so
/// that the energy is 3. Requires 0 <= a < sqrt(3).
std::vector<GaussianComponent> bimaxwellian_parameters(double separation);

struct Moments {
  double mass = 0.0;
  Vec3 momentum{0.0, 0.0, 0.0};
  double energy = 0.0;  // integral of f |v|^2
};

Moments moments(const VelocityGrid& grid, std::span<const double> values);
inline Moments moments(const GridDistribution& f) { return moments(f.grid(), f.values()); }

/// Multiplies f by (1 + lambda . phi), phi = (1, v1, v2, v3, |v|^2), with
/// lambda chosen so that the discrete collision invariants equal `target`
/// exactly (to roundoff). Throws NumericError if the correction would make
/// f negative.
std::vector<double> project_invariants(const VelocityGrid& grid, std::span<const double> values,
                                       const Moments& target);

/// Resamples g(v) = rho^-1 T^{3/2} f(T^{1/2} v + u) so that the result has
/// mass 1, momentum 0 and energy 3.
GridDistribution normalize(const GridDistribution& f);

struct Corpus {
  std::vector<GridDistribution> members;
  std::vector<std::vector<GaussianComponent>> parameters;
  std::uint64_t seed = 0;
  double entropy_bound = 0.0;
  std::size_t attempts = 0;
  std::vector<std::string> rejections;
};

/// Seed-deterministic corpus of normalized Gaussian mixtures with H(f) <= entropy_bound.
Corpus random_corpus(const VelocityGrid& grid, std::uint64_t seed, std::size_t count, double entropy_bound);

/// FNV-1a 64-bit hash over the raw bytes of every member's values.
std::uint64_t corpus_digest(std::span<const GridDistribution> members);

}  // namespace landau
