#include "landau/functionals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "landau/error.hpp"
#include "landau/fft_convolver.hpp"
#include "landau/kernel_table.hpp"
#include "landau/pair_sums.hpp"
#include "landau/parallel.hpp"

namespace landau {

double node_integral(const VelocityGrid& grid, const std::function<double(std::size_t, const Vec3&)>& fn) {
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis());
  const double total = parallel_block_sum(n, [&](std::size_t kz) {
    double acc = 0.0;
    Vec3 v;
    v[2] = grid.coordinate(static_cast<int>(kz));
    for (std::size_t j = 0; j < n; ++j) {
      v[1] = grid.coordinate(static_cast<int>(j));
      for (std::size_t i = 0; i < n; ++i) {
        v[0] = grid.coordinate(static_cast<int>(i));
        acc += fn(i + n * (j + n * kz), v);
      }
    }
    return acc;
  });
  if (!std::isfinite(total)) throw NumericError("non-finite integral");
  return grid.weight() * total;
}

double mass(const GridDistribution& f) { return integrate(f.grid(), f.values()); }

double moment_poly(const GridDistribution& f, double order) {
  return node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double b2 = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return f[k] * std::pow(b2, 0.5 * order);
  });
}

double moment_exp(const GridDistribution& f, double s, double kappa) {
  if (!(s > 0.0)) throw ConfigError("exponential moment needs s > 0");
  const double l = f.grid().half_extent();
  const double worst = kappa * std::pow(1.0 + 3.0 * l * l, 0.5 * s);
  if (worst > 700.0) {
    std::ostringstream msg;
    msg << "exponential moment overflows: kappa <v>^s reaches " << worst
        << " on the grid corners; use a smaller kappa or half extent";
    throw NumericError(msg.str());
  }
  return node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double b2 = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return f[k] * std::exp(kappa * std::pow(b2, 0.5 * s));
  });
}

bool exp_moment_in_propagation_range(double s, double kappa) {
  if (!(kappa > 0.0)) return false;
  if (s > 0.0 && s < 2.0) return true;
  return s == 2.0 && kappa < 1.0 / (2.0 * std::numbers::e);
}

double lp_norm_weighted(const GridDistribution& f, double p, double q) {
  if (!(p >= 1.0)) throw ConfigError("L^p norm needs p >= 1");
  const double integral = node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double b2 = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return std::pow(std::abs(f[k]), p) * std::pow(b2, 0.5 * p * q);
  });
  return std::pow(integral, 1.0 / p);
}

double entropy(const GridDistribution& f) {
  return node_integral(f.grid(), [&](std::size_t k, const Vec3&) {
    const double x = f[k];
    return x < kEntropyCutoff ? 0.0 : x * std::log(x);
  });
}

double relative_entropy(const GridDistribution& f, const Maxwellian& m) {
  return node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double x = f[k];
    return x < kEntropyCutoff ? 0.0 : x * (std::log(x) - m.log_value(v));
  });
}

double entropy_dissipation_projection(const GridDistribution& f, double gamma) {
  return pair_projection_sum(f, *kernel_table(f.grid(), gamma));
}

double entropy_dissipation_crossform(const GridDistribution& f, double gamma) {
  return pair_crossform_sum(f, *kernel_table(f.grid(), gamma));
}

double entropy_dissipation(const GridDistribution& f, double gamma, PairBackend backend) {
  if (backend == PairBackend::kDirect) return entropy_dissipation_projection(f, gamma);
  const VectorField j = flux_engine(f.grid(), gamma)->flux(f);
  const auto& s = f.score();
  const double d =
      node_integral(f.grid(), [&](std::size_t k, const Vec3&) { return j.x[k] * s.x[k] + j.y[k] * s.y[k] + j.z[k] * s.z[k]; });
  return std::max(d, 0.0);
}

double fisher_weighted(const GridDistribution& f, double alpha) {
  const auto& s = f.score();
  return node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double x = s.x[k] + v[0];
    const double y = s.y[k] + v[1];
    const double z = s.z[k] + v[2];
    const double b2 = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return f[k] * (x * x + y * y + z * z) * std::pow(b2, 0.5 * alpha);
  });
}

Mat3 pressure_tensor(const GridDistribution& f) {
  Mat3 p{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      p[i][j] = node_integral(f.grid(), [&](std::size_t k, const Vec3& v) { return f[k] * v[i] * v[j]; });
      p[j][i] = p[i][j];
    }
  return p;
}

double delta_f(const Mat3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) best = std::min(best, p[i][i] * p[j][j] - p[i][j] * p[i][j]);
  return best;
}

double rij_field(const GridDistribution& f, std::size_t k, std::size_t l, int i, int j) {
  if (i == j) throw ConfigError("R_ij requires distinct indices");
  if (i < 0 || i > 2 || j < 0 || j > 2) throw ConfigError("R_ij indices must be in {0, 1, 2}");
  const Vec3 vk = f.grid().node(k);
  const Vec3 vl = f.grid().node(l);
  const auto& s = f.score();
  const double zi = vk[i] - vl[i];
  const double zj = vk[j] - vl[j];
  const double di = s[i][k] - s[i][l];
  const double dj = s[j][k] - s[j][l];
  return zi * dj - zj * di;
}

double small_set_concentration(const GridDistribution& f, double q) {
  if (!(q > 0.0)) throw ConfigError("small-set measure must be positive");
  std::vector<double> sorted(f.data());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const double w = f.grid().weight();
  double remaining = q;
  std::vector<double> taken;
  taken.reserve(sorted.size());
  for (double x : sorted) {
    if (remaining <= 0.0) break;
    const double part = std::min(w, remaining);
    taken.push_back(part * x);
    remaining -= part;
  }
  return pairwise_sum(taken);
}

PartitionPair partition_functions(const GridDistribution& f, double weight) {
  const Maxwellian mu{};
  PartitionPair z;
  z.z1 = node_integral(f.grid(), [&](std::size_t, const Vec3& v) {
    const double b2 = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return mu(v) * std::pow(b2, 0.5 * weight);
  });
  z.z2 = node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double b2 = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    return f[k] * std::pow(b2, 0.5 * weight);
  });
  return z;
}

FunctionalReport functional_report(const GridDistribution& f, const FunctionalOptions& options) {
  FunctionalReport r;
  const Moments m = moments(f);
  r.mass = m.mass;
  r.momentum = m.momentum;
  r.energy = m.energy;
  r.entropy = entropy(f);
  r.relative_entropy = relative_entropy(f);
  r.dissipation = entropy_dissipation(f, options.gamma, options.backend);
  for (double a : options.fisher_alphas) r.fisher_weighted[a] = fisher_weighted(f, a);
  for (double l : options.poly_orders) r.poly_moments[l] = moment_poly(f, l);
  for (const auto& [s, kappa] : options.exp_params) r.exp_moments[{s, kappa}] = moment_exp(f, s, kappa);
  r.pressure = pressure_tensor(f);
  r.delta = delta_f(r.pressure);
  r.l3_norm = lp_norm_weighted(f, 3.0, -3.0);
  const PartitionPair z = partition_functions(f);
  r.z1 = z.z1;
  r.z2 = z.z2;
  return r;
}

namespace {

std::string num_key(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

}  // namespace

std::vector<std::pair<std::string, double>> flatten(const FunctionalReport& r) {
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("mass", r.mass);
  out.emplace_back("momentum_x", r.momentum[0]);
  out.emplace_back("momentum_y", r.momentum[1]);
  out.emplace_back("momentum_z", r.momentum[2]);
  out.emplace_back("energy", r.energy);
  out.emplace_back("entropy", r.entropy);
  out.emplace_back("relative_entropy", r.relative_entropy);
  out.emplace_back("dissipation", r.dissipation);
  for (const auto& [a, v] : r.fisher_weighted) out.emplace_back("fisher_weighted_" + num_key(a), v);
  for (const auto& [l, v] : r.poly_moments) out.emplace_back("poly_moments_" + num_key(l), v);
  for (const auto& [sk, v] : r.exp_moments)
    out.emplace_back("exp_moments_" + num_key(sk.first) + "_" + num_key(sk.second), v);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      out.emplace_back("pressure_" + std::to_string(i + 1) + std::to_string(j + 1), r.pressure[i][j]);
  out.emplace_back("delta", r.delta);
  out.emplace_back("l3_norm", r.l3_norm);
  out.emplace_back("z1", r.z1);
  out.emplace_back("z2", r.z2);
  return out;
}

}  // namespace landau
