#include "landau/fft_convolver.hpp"

#include <fftw3.h>

#include <deque>
#include <mutex>
#include <tuple>

#include "landau/error.hpp"
#include "landau/kernel_table.hpp"

namespace landau {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealBuffer {
  double* data;
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {
    if (data == nullptr) throw NumericError("FFT buffer allocation failed");
  }
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
};

struct ComplexBuffer {
  fftw_complex* data;
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw NumericError("FFT buffer allocation failed");
  }
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
};

inline std::size_t wrap(int d, int m) { return static_cast<std::size_t>(d < 0 ? d + m : d); }

}  // namespace

FftConvolver::FftConvolver(const VelocityGrid& grid) : grid_(grid), m_(2 * grid.points_per_axis()) {
  const std::size_t m = static_cast<std::size_t>(m_);
  real_size_ = m * m * m;
  complex_size_ = m * m * (m / 2 + 1);
  RealBuffer r(real_size_);
  ComplexBuffer c(complex_size_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c_3d(m_, m_, m_, r.data, c.data, flags);
  inverse_plan_ = fftw_plan_dft_c2r_3d(m_, m_, m_, c.data, r.data, flags);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) throw NumericError("FFTW planning failed");
}

FftConvolver::~FftConvolver() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

FftConvolver::Spectrum FftConvolver::kernel_spectrum(const std::function<double(const Vec3&)>& kernel) const {
  const int n = grid_.points_per_axis();
  const double h = grid_.spacing();
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> padded(real_size_, 0.0);
  for (int dz = -(n - 1); dz <= n - 1; ++dz)
    for (int dy = -(n - 1); dy <= n - 1; ++dy)
      for (int dx = -(n - 1); dx <= n - 1; ++dx) {
        if (dx == 0 && dy == 0 && dz == 0) continue;
        const std::size_t idx = wrap(dx, m_) + m * (wrap(dy, m_) + m * wrap(dz, m_));
        padded[idx] = kernel({dx * h, dy * h, dz * h});
      }
  Spectrum out(complex_size_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), padded.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

FftConvolver::Spectrum FftConvolver::forward(std::span<const double> field) const {
  if (field.size() != grid_.size()) throw ConfigError("field size does not match grid");
  const std::size_t n = static_cast<std::size_t>(grid_.points_per_axis());
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> padded(real_size_, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) padded[i + m * (j + m * k)] = field[i + n * (j + n * k)];
  Spectrum out(complex_size_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), padded.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> FftConvolver::inverse(const Spectrum& spectrum) const {
  if (spectrum.size() != complex_size_) throw ConfigError("spectrum size does not match convolver");
  // c2r destroys its input.
  Spectrum scratch(spectrum);
  std::vector<double> padded(real_size_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(scratch.data()),
                       padded.data());
  const std::size_t n = static_cast<std::size_t>(grid_.points_per_axis());
  const std::size_t m = static_cast<std::size_t>(m_);
  const double scale = 1.0 / static_cast<double>(real_size_);
  std::vector<double> out(grid_.size());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) out[i + n * (j + n * k)] = scale * padded[i + m * (j + m * k)];
  return out;
}

std::vector<double> FftConvolver::convolve(const Spectrum& kernel, std::span<const double> field) const {
  Spectrum s = forward(field);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= kernel[i];
  return inverse(s);
}

void FftConvolver::multiply_accumulate(Spectrum& out, const Spectrum& a, const Spectrum& b) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a[i] * b[i];
}

FftFluxEngine::FftFluxEngine(const VelocityGrid& grid, double gamma) : conv_(grid), gamma_(gamma) {
  validate_gamma(gamma);
  static constexpr int rows[6] = {0, 0, 0, 1, 1, 2};
  static constexpr int cols[6] = {0, 1, 2, 1, 2, 2};
  for (int c = 0; c < 6; ++c) {
    kernel_[static_cast<std::size_t>(c)] =
        conv_.kernel_spectrum([&](const Vec3& z) { return landau_matrix(z, gamma)[rows[c]][cols[c]]; });
  }
}

VectorField FftFluxEngine::flux(const GridDistribution& f) const {
  const VelocityGrid& grid = conv_.grid();
  if (!(f.grid() == grid)) throw ConfigError("distribution grid does not match flux engine");
  const std::size_t count = grid.size();
  const double w = grid.weight();
  const auto& s = f.score();
  std::vector<double> wf(count);
  for (std::size_t i = 0; i < count; ++i) wf[i] = w * f[i];
  const FftConvolver::Spectrum g0 = conv_.forward(wf);
  std::array<FftConvolver::Spectrum, 3> gs;
  for (int b = 0; b < 3; ++b) {
    std::vector<double> tmp(count);
    for (std::size_t i = 0; i < count; ++i) tmp[i] = wf[i] * s[b][i];
    gs[static_cast<std::size_t>(b)] = conv_.forward(tmp);
  }
  // component index of a_ab in the packed symmetric layout
  static constexpr int packed[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  std::array<std::vector<double>, 6> cmat;
  for (int c = 0; c < 6; ++c) {
    FftConvolver::Spectrum prod(g0.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = kernel_[static_cast<std::size_t>(c)][i] * g0[i];
    cmat[static_cast<std::size_t>(c)] = conv_.inverse(prod);
  }
  VectorField out(count);
  for (int a = 0; a < 3; ++a) {
    FftConvolver::Spectrum acc(g0.size(), {0.0, 0.0});
    for (int b = 0; b < 3; ++b)
      FftConvolver::multiply_accumulate(acc, kernel_[static_cast<std::size_t>(packed[a][b])],
                                        gs[static_cast<std::size_t>(b)]);
    const std::vector<double> e = conv_.inverse(acc);
    std::vector<double>& ja = out[a];
    for (std::size_t i = 0; i < count; ++i) {
      double cs = 0.0;
      for (int b = 0; b < 3; ++b) cs += cmat[static_cast<std::size_t>(packed[a][b])][i] * s[b][i];
      ja[i] = f[i] * (cs - e[i]);
    }
  }
  return out;
}

}  // namespace landau

namespace landau {

std::shared_ptr<const FftFluxEngine> flux_engine(const VelocityGrid& grid, double gamma) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mutex;
  static std::deque<std::pair<Key, std::shared_ptr<const FftFluxEngine>>> cache;
  const Key key{grid.points_per_axis(), grid.half_extent(), gamma};
  std::lock_guard<std::mutex> lock(mutex);
  for (const auto& [k, engine] : cache)
    if (k == key) return engine;
  auto engine = std::make_shared<const FftFluxEngine>(grid, gamma);
  cache.emplace_back(key, engine);
  if (cache.size() > 3) cache.pop_front();
  return engine;
}

}  // namespace landau
