#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "landau/distribution.hpp"

namespace landau {

/// <v> = sqrt(1 + |v|^2)
inline double japanese_bracket(const Vec3& v) { return std::sqrt(1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

/// w * sum_k fn(k, v_k), summed per z-plane then pairwise. Throws
/// NumericError on a non-finite result.
double node_integral(const VelocityGrid& grid, const std::function<double(std::size_t, const Vec3&)>& fn);

double mass(const GridDistribution& f);

/// M_l(f) = int <v>^l f
double moment_poly(const GridDistribution& f, double order);

/// M_{s,kappa}(f) = int exp(kappa <v>^s) f. Throws NumericError when
/// kappa <v>^s overflows on the grid.
double moment_exp(const GridDistribution& f, double s, double kappa);

/// Whether (s, kappa) lies where exponential moments are known to propagate:
/// kappa > 0 with 0 < s < 2, or 0 < kappa < 1/(2e) with s = 2.
bool exp_moment_in_propagation_range(double s, double kappa);

/// (int |f|^p (1 + |v|^2)^{pq/2})^{1/p}
double lp_norm_weighted(const GridDistribution& f, double p, double q);

/// int f log f, skipping nodes with f below kEntropyCutoff.
double entropy(const GridDistribution& f);

/// int f log(f / m) against the sampled Maxwellian m.
double relative_entropy(const GridDistribution& f, const Maxwellian& m = {});

enum class PairBackend { kDirect, kFft };

/// D(f) in projection form (direct pair sum).
double entropy_dissipation_projection(const GridDistribution& f, double gamma);
/// D(f) in cross-product form (direct pair sum).
double entropy_dissipation_crossform(const GridDistribution& f, double gamma);
/// D(f) = w sum_k J_k . s_k, with the flux evaluated by the selected backend.
/// The direct backend uses the projection pair sum.
double entropy_dissipation(const GridDistribution& f, double gamma, PairBackend backend);

/// I_alpha(f | mu) = int f |s + v|^2 <v>^alpha
double fisher_weighted(const GridDistribution& f, double alpha);

/// P_ij = int f v_i v_j
Mat3 pressure_tensor(const GridDistribution& f);
/// min over pairs i < j of P_ii P_jj - P_ij^2
double delta_f(const Mat3& p);
inline double delta_f(const GridDistribution& f) { return delta_f(pressure_tensor(f)); }

/// R_ij(v_k, v_l) = (v_k - v_l)_i (s_k - s_l)_j - (v_k - v_l)_j (s_k - s_l)_i; i != j.
double rij_field(const GridDistribution& f, std::size_t k, std::size_t l, int i, int j);

/// Largest mass carried by a set of measure at most q (greedy over sorted
/// node values, fractional last cell).
double small_set_concentration(const GridDistribution& f, double q);

/// Z = int <v>^{weight} g for g = mu (sampled) and g = f.
struct PartitionPair {
  double z1 = 0.0;  // reduced Maxwellian
  double z2 = 0.0;  // f
};
PartitionPair partition_functions(const GridDistribution& f, double weight = -3.0);

struct FunctionalOptions {
  double gamma = -3.0;
  PairBackend backend = PairBackend::kDirect;
  std::vector<double> fisher_alphas{-3.0, 0.0};
  std::vector<double> poly_orders{0.0, 2.0, 5.0, 10.0};
  std::vector<std::pair<double, double>> exp_params{{0.5, 0.5}, {1.0, 0.1}};
};

struct FunctionalReport {
  double mass = 0.0;
  Vec3 momentum{};
  double energy = 0.0;
  double entropy = 0.0;
  double relative_entropy = 0.0;
  double dissipation = 0.0;
  std::map<double, double> fisher_weighted;
  std::map<double, double> poly_moments;
  std::map<std::pair<double, double>, double> exp_moments;
  Mat3 pressure{};
  double delta = 0.0;
  double l3_norm = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
};

FunctionalReport functional_report(const GridDistribution& f, const FunctionalOptions& options = {});

/// Flat key/value view used by the JSON and CSV writers (ordered).
std::vector<std::pair<std::string, double>> flatten(const FunctionalReport& report);

}  // namespace landau
