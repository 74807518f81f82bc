#include "landau/collision.hpp"

#include <cmath>
#include <numbers>

#include "landau/error.hpp"
#include "landau/fft_convolver.hpp"
#include "landau/kernel_table.hpp"
#include "landau/pair_sums.hpp"
#include "landau/parallel.hpp"

namespace landau {

CollisionOperator::CollisionOperator(const VelocityGrid& grid, double gamma, PairBackend backend)
    : grid_(grid), gamma_(gamma), backend_(backend) {
  validate_gamma(gamma);
  if (backend == PairBackend::kDirect) {
    table_ = kernel_table(grid, gamma);
  } else {
    engine_ = flux_engine(grid, gamma);
  }
}

VectorField CollisionOperator::flux(const GridDistribution& f) const {
  if (!(f.grid() == grid_)) throw ConfigError("distribution grid does not match collision operator");
  return backend_ == PairBackend::kDirect ? pair_flux(f, *table_) : engine_->flux(f);
}

CollisionOperator::Evaluation CollisionOperator::evaluate(const GridDistribution& f) const {
  VectorField j = flux(f);
  Evaluation out;
  const auto& s = f.score();
  std::vector<double> js(f.size());
  for (std::size_t k = 0; k < js.size(); ++k) js[k] = j.x[k] * s.x[k] + j.y[k] * s.y[k] + j.z[k] * s.z[k];
  out.dissipation = grid_.weight() * pairwise_sum(js);
  out.q = gradient_transpose(grid_, j);
  for (double& x : out.q) x = -x;
  return out;
}

std::vector<double> collision_operator(const GridDistribution& f, double gamma, PairBackend backend) {
  return CollisionOperator(f.grid(), gamma, backend).apply(f);
}

double weak_pairing(const VelocityGrid& grid, std::span<const double> a, std::span<const double> b) {
  std::vector<double> prod(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) prod[k] = a[k] * b[k];
  return grid.weight() * pairwise_sum(prod);
}

namespace {

constexpr int kRows[6] = {0, 0, 0, 1, 1, 2};
constexpr int kCols[6] = {0, 1, 2, 1, 2, 2};

std::array<std::vector<double>, 6> matrix_convolutions(const FftConvolver& conv, double gamma,
                                                       std::span<const double> field) {
  const FftConvolver::Spectrum g = conv.forward(field);
  std::array<std::vector<double>, 6> out;
  for (int c = 0; c < 6; ++c) {
    const auto ks = conv.kernel_spectrum([&](const Vec3& z) { return landau_matrix(z, gamma)[kRows[c]][kCols[c]]; });
    FftConvolver::Spectrum prod(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) prod[i] = ks[i] * g[i];
    out[static_cast<std::size_t>(c)] = conv.inverse(prod);
  }
  return out;
}

}  // namespace

double weak_form_convolution(const GridDistribution& f, double gamma, const TestFunction& phi) {
  validate_gamma(gamma);
  const VelocityGrid& grid = f.grid();
  const FftConvolver conv(grid);
  std::vector<double> wf(f.size());
  for (std::size_t k = 0; k < wf.size(); ++k) wf[k] = grid.weight() * f[k];
  const auto a = matrix_convolutions(conv, gamma, wf);
  const FftConvolver::Spectrum g = conv.forward(wf);
  std::array<std::vector<double>, 3> b;
  for (int i = 0; i < 3; ++i) {
    const auto ks = conv.kernel_spectrum([&](const Vec3& z) { return landau_drift(z, gamma)[i]; });
    FftConvolver::Spectrum prod(g.size());
    for (std::size_t m = 0; m < g.size(); ++m) prod[m] = ks[m] * g[m];
    b[static_cast<std::size_t>(i)] = conv.inverse(prod);
  }
  std::vector<double> integrand(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec3 v = grid.node(k);
    const Mat3 hs = phi.hessian(v);
    const Vec3 gr = phi.gradient(v);
    double acc = 0.0;
    for (int c = 0; c < 6; ++c) {
      const double mult = kRows[c] == kCols[c] ? 1.0 : 2.0;
      acc += mult * a[static_cast<std::size_t>(c)][k] * hs[kRows[c]][kCols[c]];
    }
    for (int i = 0; i < 3; ++i) acc += 2.0 * b[static_cast<std::size_t>(i)][k] * gr[i];
    integrand[k] = f[k] * acc;
  }
  return grid.weight() * pairwise_sum(integrand);
}

std::vector<double> collision_operator_convolution(const GridDistribution& f, double gamma) {
  validate_gamma(gamma);
  const VelocityGrid& grid = f.grid();
  const FftConvolver conv(grid);
  std::vector<double> wf(f.size());
  for (std::size_t k = 0; k < wf.size(); ++k) wf[k] = grid.weight() * f[k];
  const auto a = matrix_convolutions(conv, gamma, wf);
  const VectorField df = gradient(grid, f.values());
  std::array<VectorField, 3> hess;
  for (int i = 0; i < 3; ++i) hess[static_cast<std::size_t>(i)] = gradient(grid, df[i]);
  std::vector<double> cf(f.size(), 0.0);
  if (gamma == -3.0) {
    for (std::size_t k = 0; k < f.size(); ++k) cf[k] = -8.0 * std::numbers::pi * f[k];
  } else {
    const auto ks = conv.kernel_spectrum([&](const Vec3& z) { return landau_divergence(z, gamma); });
    cf = conv.convolve(ks, wf);
  }
  std::vector<double> q(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    double acc = 0.0;
    for (int c = 0; c < 6; ++c) {
      const int i = kRows[c];
      const int j = kCols[c];
      const double hij = 0.5 * (hess[static_cast<std::size_t>(i)][j][k] + hess[static_cast<std::size_t>(j)][i][k]);
      acc += (i == j ? 1.0 : 2.0) * a[static_cast<std::size_t>(c)][k] * hij;
    }
    q[k] = acc - cf[k] * f[k];
  }
  return q;
}

}  // namespace landau
