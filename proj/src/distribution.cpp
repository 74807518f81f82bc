#include "landau/distribution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "landau/error.hpp"
#include "landau/functionals.hpp"
#include "landau/parallel.hpp"

namespace landau {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite_nonnegative(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      std::ostringstream msg;
      msg << "density must be finite and nonnegative; node " << i << " holds " << values[i];
      throw NumericError(msg.str());
    }
  }
}

}  // namespace

VectorField log_score(const VelocityGrid& grid, std::span<const double> values) {
  std::vector<double> logf(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) logf[i] = std::log(std::max(values[i], kDensityFloor));
  return gradient(grid, logf);
}

GridDistribution::GridDistribution(VelocityGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ConfigError("density size does not match grid");
  require_finite_nonnegative(values_);
  score_ = std::make_shared<const VectorField>(log_score(grid_, values_));
}

GridDistribution GridDistribution::scaled(double factor) const {
  if (!(factor > 0.0)) throw ConfigError("scale factor must be positive");
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return GridDistribution(grid_, std::move(v));
}

double Maxwellian::operator()(const Vec3& v) const {
  if (density == 0.0) return 0.0;
  return std::exp(log_value(v));
}

double Maxwellian::log_value(const Vec3& v) const {
  double r2 = 0.0;
  for (int a = 0; a < 3; ++a) r2 += (v[a] - mean[a]) * (v[a] - mean[a]);
  return std::log(density) - 1.5 * std::log(kTwoPi * temperature) - r2 / (2.0 * temperature);
}

GridDistribution maxwellian(const VelocityGrid& grid, double density, const Vec3& mean, double temperature) {
  if (!(temperature > 0.0)) throw ConfigError("Maxwellian temperature must be positive");
  if (!(density >= 0.0)) throw ConfigError("Maxwellian density must be nonnegative");
  const Maxwellian m{density, mean, temperature};
  return GridDistribution(grid, sample(grid, m));
}

GridDistribution reduced_maxwellian(const VelocityGrid& grid) { return maxwellian(grid, 1.0, {0, 0, 0}, 1.0); }

GridDistribution anisotropic_gaussian(const VelocityGrid& grid, double t1, double t2, double t3) {
  if (!(t1 > 0.0) || !(t2 > 0.0) || !(t3 > 0.0)) throw ConfigError("axis temperatures must be positive");
  const GaussianComponent c{1.0, {0, 0, 0}, {t1, t2, t3}};
  return gaussian_mixture(grid, std::span<const GaussianComponent>(&c, 1));
}

GridDistribution covariance_gaussian(const VelocityGrid& grid, const Mat3& covariance, const Vec3& mean) {
  Eigen::Matrix3d s;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s(a, b) = covariance[a][b];
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-14 * s.cwiseAbs().maxCoeff()) {
    throw ConfigError("covariance must be symmetric");
  }
  Eigen::LLT<Eigen::Matrix3d> llt(s);
  if (llt.info() != Eigen::Success) throw ConfigError("covariance must be positive definite");
  const Eigen::Matrix3d inv = llt.solve(Eigen::Matrix3d::Identity());
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double lognorm = -1.5 * std::log(kTwoPi) - 0.5 * logdet;
  auto values = sample(grid, [&](const Vec3& v) {
    const Eigen::Vector3d d(v[0] - mean[0], v[1] - mean[1], v[2] - mean[2]);
    return std::exp(lognorm - 0.5 * d.dot(inv * d));
  });
  return GridDistribution(grid, std::move(values));
}

GridDistribution gaussian_mixture(const VelocityGrid& grid, std::span<const GaussianComponent> components) {
  if (components.empty()) throw ConfigError("mixture needs at least one component");
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw ConfigError("mixture weights must be positive");
    for (double t : c.temperature)
      if (!(t > 0.0)) throw ConfigError("mixture temperatures must be positive");
  }
  // Each component is separable, so evaluate per-axis factors once.
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
  std::vector<double> values(grid.size(), 0.0);
  std::vector<double> fx(n), fy(n), fz(n);
  for (const auto& c : components) {
    auto axis = [&](int a, std::vector<double>& out) {
      const double t = c.temperature[a];
      const double norm = 1.0 / std::sqrt(kTwoPi * t);
      for (std::size_t i = 0; i < n; ++i) {
        const double d = grid.coordinate(static_cast<int>(i)) - c.mean[a];
        out[i] = norm * std::exp(-d * d / (2.0 * t));
      }
    };
    axis(0, fx);
    axis(1, fy);
    axis(2, fz);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        const double wyz = c.weight * fy[j] * fz[k];
        double* row = values.data() + n * (j + n * k);
        for (std::size_t i = 0; i < n; ++i) row[i] += wyz * fx[i];
      }
  }
  return GridDistribution(grid, std::move(values));
}

std::vector<GaussianComponent> normalized_mixture_parameters(std::span<const GaussianComponent> components) {
  if (components.empty()) throw ConfigError("mixture needs at least one component");
  double mass = 0.0;
  Vec3 first{0, 0, 0};
  double second = 0.0;
  for (const auto& c : components) {
    mass += c.weight;
    for (int a = 0; a < 3; ++a) {
      first[a] += c.weight * c.mean[a];
      second += c.weight * (c.temperature[a] + c.mean[a] * c.mean[a]);
    }
  }
  Vec3 u{};
  double centred = second / mass;
  for (int a = 0; a < 3; ++a) {
    u[a] = first[a] / mass;
    centred -= u[a] * u[a];
  }
  if (!(centred > 0.0)) throw NumericError("mixture has zero temperature");
  const double lambda = std::sqrt(3.0 / centred);
  std::vector<GaussianComponent> out;
  out.reserve(components.size());
  for (const auto& c : components) {
    GaussianComponent d;
    d.weight = c.weight / mass;
    for (int a = 0; a < 3; ++a) {
      d.mean[a] = lambda * (c.mean[a] - u[a]);
      d.temperature[a] = lambda * lambda * c.temperature[a];
    }
    out.push_back(d);
  }
  return out;
}

std::vector<GaussianComponent> bimaxwellian_parameters(double separation) {
  if (!(separation >= 0.0) || separation * separation >= 3.0) {
    throw ConfigError("bi-Maxwellian separation must lie in [0, sqrt(3))");
  }
  const double t = 1.0 - separation * separation / 3.0;
  return {GaussianComponent{0.5, {separation, 0, 0}, {t, t, t}},
          GaussianComponent{0.5, {-separation, 0, 0}, {t, t, t}}};
}

Moments moments(const VelocityGrid& grid, std::span<const double> values) {
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
  // Accumulate per z-plane, then combine pairwise: deterministic ordering.
  auto sums = parallel_block_sum(n, 5, [&](std::size_t k, double* out) {
    const double vz = grid.coordinate(static_cast<int>(k));
    double m = 0, px = 0, py = 0, pz = 0, e = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double vy = grid.coordinate(static_cast<int>(j));
      const double* row = values.data() + n * (j + n * k);
      for (std::size_t i = 0; i < n; ++i) {
        const double vx = grid.coordinate(static_cast<int>(i));
        const double f = row[i];
        m += f;
        px += f * vx;
        py += f * vy;
        pz += f * vz;
        e += f * (vx * vx + vy * vy + vz * vz);
      }
    }
    out[0] = m;
    out[1] = px;
    out[2] = py;
    out[3] = pz;
    out[4] = e;
  });
  const double w = grid.weight();
  return Moments{w * sums[0], {w * sums[1], w * sums[2], w * sums[3]}, w * sums[4]};
}

std::vector<double> project_invariants(const VelocityGrid& grid, std::span<const double> values,
                                       const Moments& target) {
  const std::size_t count = values.size();
  // Gram matrix G_ab = sum w f phi_a phi_b and residual.
  Eigen::Matrix<double, 5, 5> gram = Eigen::Matrix<double, 5, 5>::Zero();
  for (std::size_t idx = 0; idx < count; ++idx) {
    const Vec3 v = grid.node(idx);
    const double phi[5] = {1.0, v[0], v[1], v[2], v[0] * v[0] + v[1] * v[1] + v[2] * v[2]};
    const double f = values[idx];
    for (int a = 0; a < 5; ++a)
      for (int b = a; b < 5; ++b) gram(a, b) += f * phi[a] * phi[b];
  }
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < a; ++b) gram(a, b) = gram(b, a);
  gram *= grid.weight();
  const Moments now = moments(grid, values);
  Eigen::Matrix<double, 5, 1> rhs;
  rhs << target.mass - now.mass, target.momentum[0] - now.momentum[0], target.momentum[1] - now.momentum[1],
      target.momentum[2] - now.momentum[2], target.energy - now.energy;
  Eigen::LDLT<Eigen::Matrix<double, 5, 5>> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw NumericError("invariant projection: singular Gram matrix");
  const Eigen::Matrix<double, 5, 1> lambda = ldlt.solve(rhs);
  std::vector<double> out(values.begin(), values.end());
  for (std::size_t idx = 0; idx < count; ++idx) {
    const Vec3 v = grid.node(idx);
    const double factor = 1.0 + lambda[0] + lambda[1] * v[0] + lambda[2] * v[1] + lambda[3] * v[2] +
                          lambda[4] * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (factor < 0.0) throw NumericError("invariant projection would make the density negative");
    out[idx] *= factor;
  }
  return out;
}

namespace {

// Four-point Lagrange interpolation of one grid line at coordinate x.
// Points outside [-L, L] evaluate to zero.
double interpolate_line(const double* line, std::size_t stride, const VelocityGrid& grid, double x) {
  const int n = grid.points_per_axis();
  const double l = grid.half_extent();
  if (x < -l || x > l) return 0.0;
  const double p = (x + l) / grid.spacing();
  int i0 = static_cast<int>(std::floor(p)) - 1;
  i0 = std::clamp(i0, 0, n - 4);
  const double t = p - i0;
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double basis = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) basis *= (t - b) / static_cast<double>(a - b);
    acc += basis * line[static_cast<std::size_t>(i0 + a) * stride];
  }
  return acc;
}

std::vector<double> resample_axis(const VelocityGrid& grid, const std::vector<double>& in, int axis, double scale,
                                  double shift) {
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
  const std::size_t strides[3] = {1, n, n * n};
  const std::size_t stride = strides[axis];
  const std::size_t s1 = strides[(axis + 1) % 3];
  const std::size_t s2 = strides[(axis + 2) % 3];
  std::vector<double> out(in.size());
  std::vector<double> targets(n);
  for (std::size_t m = 0; m < n; ++m) targets[m] = scale * grid.coordinate(static_cast<int>(m)) + shift;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t base = a * s1 + b * s2;
      for (std::size_t m = 0; m < n; ++m)
        out[base + m * stride] = interpolate_line(in.data() + base, stride, grid, targets[m]);
    }
  return out;
}

}  // namespace

GridDistribution normalize(const GridDistribution& f) {
  const VelocityGrid& grid = f.grid();
  std::vector<double> values = f.data();
  for (int iter = 0; iter < 6; ++iter) {
    const Moments m = moments(grid, values);
    if (!(m.mass > 0.0)) throw NumericError("cannot normalize a density with zero mass");
    Vec3 u;
    double centred = m.energy / m.mass;
    for (int a = 0; a < 3; ++a) {
      u[a] = m.momentum[a] / m.mass;
      centred -= u[a] * u[a];
    }
    const double t = centred / 3.0;
    if (!(t > 0.0)) throw NumericError("cannot normalize a density with zero temperature");
    const double drift = std::max({std::abs(t - 1.0), std::abs(u[0]), std::abs(u[1]), std::abs(u[2])});
    if (drift < 1e-13) break;
    const double st = std::sqrt(t);
    for (int axis = 0; axis < 3; ++axis) values = resample_axis(grid, values, axis, st, u[axis]);
    const double factor = std::pow(t, 1.5) / m.mass;
    for (double& x : values) x = std::max(x, 0.0) * factor;
  }
  values = project_invariants(grid, values, Moments{1.0, {0.0, 0.0, 0.0}, 3.0});
  return GridDistribution(grid, std::move(values));
}

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

constexpr double kMinResolvedTemperature = 0.3;

}  // namespace

Corpus random_corpus(const VelocityGrid& grid, std::uint64_t seed, std::size_t count, double entropy_bound) {
  if (count < 1) throw ConfigError("corpus count must be at least 1");
  Corpus corpus;
  corpus.seed = seed;
  corpus.entropy_bound = entropy_bound;
  std::mt19937_64 rng(seed);
  const std::size_t max_attempts = 100 * count;
  while (corpus.members.size() < count && corpus.attempts < max_attempts) {
    ++corpus.attempts;
    const int components = 1 + static_cast<int>(uniform01(rng) * 4.0);
    std::vector<GaussianComponent> raw(static_cast<std::size_t>(components));
    for (auto& c : raw) {
      c.weight = uniform(rng, 0.2, 1.0);
      for (int a = 0; a < 3; ++a) c.mean[a] = uniform(rng, -1.0, 1.0);
      for (int a = 0; a < 3; ++a) c.temperature[a] = uniform(rng, 0.5, 1.5);
    }
    const auto params = normalized_mixture_parameters(raw);
    double tmin = 1e300;
    for (const auto& c : params)
      for (double t : c.temperature) tmin = std::min(tmin, t);
    std::ostringstream tag;
    tag << "attempt " << corpus.attempts << ": ";
    if (tmin < kMinResolvedTemperature) {
      tag << "component temperature " << tmin << " below resolution guard " << kMinResolvedTemperature;
      corpus.rejections.push_back(tag.str());
      continue;
    }
    GridDistribution f = normalize(gaussian_mixture(grid, params));
    const double h = entropy(f);
    if (h > entropy_bound) {
      tag << "entropy " << h << " exceeds bound " << entropy_bound;
      corpus.rejections.push_back(tag.str());
      continue;
    }
    corpus.members.push_back(std::move(f));
    corpus.parameters.push_back(params);
  }
  if (corpus.members.size() < count) {
    std::ostringstream msg;
    msg << "random_corpus: only " << corpus.members.size() << " of " << count << " admissible draws in "
        << corpus.attempts << " attempts (seed " << seed << ", entropy bound " << entropy_bound << ")";
    throw NumericError(msg.str());
  }
  return corpus;
}

std::uint64_t corpus_digest(std::span<const GridDistribution> members) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& f : members) {
    for (double x : f.values()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &x, sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  }
  return h;
}

}  // namespace landau
