#include <doctest.h>

#include <cmath>

#include "landau/distribution.hpp"
#include "landau/fft_convolver.hpp"
#include "landau/functionals.hpp"
#include "landau/kernel_table.hpp"
#include "landau/pair_sums.hpp"
#include "landau/parallel.hpp"
#include "landau/simd.hpp"

using namespace landau;

namespace {

struct SimdGuard {
  ~SimdGuard() { force_simd_level(avx2_supported() ? SimdLevel::kAvx2 : SimdLevel::kScalar); }
};

double max_abs(const VectorField& a) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (double x : a[c]) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[c][k] - b[c][k]));
  return m;
}

}  // namespace

TEST_CASE("scalar and AVX2 row kernels agree") {
  if (!avx2_supported()) {
    MESSAGE("AVX2 not available; only the scalar path is exercised");
    return;
  }
  SimdGuard guard;
  const VelocityGrid g(6.0, 13);
  const Corpus c = random_corpus(g, 5, 3, 0.0);
  for (double gamma : {-3.0, -2.0, 0.0}) {
    const auto table = kernel_table(g, gamma);
    for (const auto& f : c.members) {
      force_simd_level(SimdLevel::kScalar);
      const double ps = pair_projection_sum(f, *table);
      const double cs = pair_crossform_sum(f, *table);
      const VectorField fs = pair_flux(f, *table);
      force_simd_level(SimdLevel::kAvx2);
      CHECK(active_simd_level() == SimdLevel::kAvx2);
      CHECK(pair_projection_sum(f, *table) == doctest::Approx(ps).epsilon(1e-13));
      CHECK(pair_crossform_sum(f, *table) == doctest::Approx(cs).epsilon(1e-13));
      CHECK(max_diff(pair_flux(f, *table), fs) <= 1e-13 * max_abs(fs));
    }
  }
}

TEST_CASE("FFT flux matches the direct flux") {
  const VelocityGrid g(6.0, 12);
  const GridDistribution f = gaussian_mixture(g, bimaxwellian_parameters(1.0));
  for (double gamma : {-3.0, -1.5, 0.0}) {
    const VectorField direct = pair_flux(f, *kernel_table(g, gamma));
    const VectorField fft = flux_engine(g, gamma)->flux(f);
    CHECK(max_diff(direct, fft) <= 1e-12 * max_abs(direct));
  }
}

TEST_CASE("FFT convolution matches the direct lattice sum") {
  const VelocityGrid g(3.0, 8);
  FftConvolver conv(g);
  const auto kernel = [](const Vec3& z) { return std::exp(-z[0] * z[0] - 0.5 * z[1] * z[1]) + 0.1 * z[2]; };
  std::vector<double> field(g.size());
  for (std::size_t k = 0; k < field.size(); ++k) field[k] = std::sin(0.37 * static_cast<double>(k));
  const auto out = conv.convolve(conv.kernel_spectrum(kernel), field);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double s = 0.0;
    for (std::size_t l = 0; l < g.size(); ++l) {
      if (l == k) continue;
      const Vec3 a = g.node(k), b = g.node(l);
      s += kernel({a[0] - b[0], a[1] - b[1], a[2] - b[2]}) * field[l];
    }
    worst = std::max(worst, std::abs(s - out[k]));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("pair sums are bit-identical across thread counts") {
  const VelocityGrid g(6.0, 12);
  const GridDistribution f = gaussian_mixture(g, bimaxwellian_parameters(0.9));
  const auto table = kernel_table(g, -3.0);
  set_thread_count(1);
  const double a = pair_projection_sum(f, *table);
  const VectorField fa = pair_flux(f, *table);
  set_thread_count(3);
  const double b = pair_projection_sum(f, *table);
  const VectorField fb = pair_flux(f, *table);
  set_thread_count(1);
  CHECK(a == b);
  CHECK(fa.x == fb.x);
  CHECK(fa.z == fb.z);
}

TEST_CASE("pairwise summation is order-stable") {
  std::vector<double> v(1000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 / static_cast<double>(k + 1);
  const double s = pairwise_sum(v);
  double ref = 0.0;
  for (std::size_t k = v.size(); k-- > 0;) ref += v[k];
  CHECK(s == doctest::Approx(ref).epsilon(1e-15));
  CHECK(parallel_block_sum(v.size(), [&](std::size_t k) { return v[k]; }) == s);
}
