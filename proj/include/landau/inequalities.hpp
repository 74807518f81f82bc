#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "landau/distribution.hpp"
#include "landau/functionals.hpp"

namespace landau {

/// Outcome of one inequality check, always oriented as lhs >= rhs.
/// holds is lhs >= rhs - tolerance; vacuous marks checks with no
/// effective input (for example a corpus made only of equilibria).
struct InequalityVerdict {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double empirical_constant = 0.0;
  bool holds = false;
  bool vacuous = false;
  std::string inputs_digest;
  double tolerance = 0.0;
  std::string note;
  std::vector<std::pair<std::string, double>> details;
};

InequalityVerdict make_verdict(std::string name, double lhs, double rhs, double tolerance);

std::string digest_hex(std::uint64_t digest);

/// Folds per-member verdicts of one check into a single verdict: holds when
/// every non-vacuous part holds; lhs/rhs come from the part with the least
/// slack lhs - rhs; the empirical constant is the minimum over parts.
InequalityVerdict combine_verdicts(const std::string& name, std::span<const InequalityVerdict> parts);

/// Quantities of one distribution shared by the corpus checks.
struct MemberMetrics {
  double entropy = 0.0;
  double relative_entropy = 0.0;
  double dissipation = 0.0;
  double m5 = 0.0;
  double fisher_m3 = 0.0;  // I_{-3}(f | mu)
  Mat3 pressure{};
  double delta = 0.0;
  double l3_norm = 0.0;  // ||f||_{L^3_{-3}}
  double z1 = 0.0;
  double z2 = 0.0;
};

MemberMetrics member_metrics(const GridDistribution& f, double gamma, PairBackend backend);
std::vector<MemberMetrics> corpus_metrics(std::span<const GridDistribution> members, double gamma,
                                          PairBackend backend);

/// Members with I_{-3}(f | mu) below this are treated as equilibria.
inline constexpr double kEquilibriumFisher = 1e-12;

/// min over members of D M5 / I_{-3}(f | mu) > 0.
InequalityVerdict check_theorem_entropy(std::span<const MemberMetrics> metrics, const std::string& digest);
InequalityVerdict check_theorem_entropy(const Corpus& corpus, double gamma = -3.0,
                                        PairBackend backend = PairBackend::kFft);

/// Weighted relative entropy int {f log(Z1 f / (Z2 mu)) + (Z2 / Z1) mu - f} <v>^{-3}.
double weighted_relative_entropy(const GridDistribution& f);

/// Three verdicts: the D M5 versus weighted relative entropy ratio (with the
/// nodewise sign of the integrand), the truncated bound at radius R, and
/// 2^{-11/2} <= Z1, Z2 <= 1.
std::vector<InequalityVerdict> check_cercignani(const GridDistribution& f, double radius, double gamma = -3.0,
                                                PairBackend backend = PairBackend::kFft);

/// Constant multiplying the tail terms of the truncated bound.
inline constexpr double kTailConstant = 45.254833995939045;  // 2^{11/2}

/// Right-hand side bracket of the truncated bound at radius R:
/// H(f|mu) - int_{<v> >= R} f log f - C int_{<v> >= R} <v>^2 f - C int_{<v> >= R} mu.
double truncated_entropy_bound(const GridDistribution& f, double radius);

/// Empirical C0 = max over members of ||f||_{L^3_{-3}} / (1 + D(f)).
InequalityVerdict check_l3_regularity(std::span<const MemberMetrics> metrics, const std::string& digest);

/// Score components rebuilt from pair integrals against f(w) dw.
struct ScoreReconstruction {
  int i = 0;
  int j = 1;
  bool degenerate = false;
  std::vector<double> score_i;      // from the first Cramer formula
  std::vector<double> score_j;      // from the second Cramer formula
  std::vector<double> rotation;     // int R_ij(v, w) f(w) dw
};

ScoreReconstruction reconstruct_score(const GridDistribution& f, int i, int j);

/// max |a - b| / max |b| over interior nodes with f > threshold; falls back
/// to the absolute error when max |b| is below 1e-12.
double masked_relative_error(const GridDistribution& f, std::span<const double> a, std::span<const double> b,
                             double threshold = 1e-8);

/// Compares the reconstruction with the grid score for every pair i < j.
/// lhs = tolerance, rhs = largest relative error.
InequalityVerdict check_prop31(const GridDistribution& f, double tolerance = 1e-3);

inline constexpr double kProp32Constant = 3456.0;

/// 3456 Delta^{-2} (sup P_ij^2 + sup |P_jj - 1|^2 + M5 D) >= I_{-3}(f | mu).
InequalityVerdict check_prop32(const MemberMetrics& m);

/// 2^{-34} 3^{-4} exp(-16 max(H, 0))
double delta_lower_bound(double entropy_bound);

/// Smallest eigenvalue of the quadratic form
/// (a, b) -> int f <v>^{-5} |(v_i^2 - v_j^2) a + v_i v_j b|^2 relative to
/// a^2 + b^2 / 4, which is the infimum over phi of the angular functional.
double s_f_exact(const GridDistribution& f, int i, int j);

/// int f <v>^{-5} |(v_i^2 - v_j^2) cos phi + 2 v_i v_j sin phi|^2
double s_f_angular(const GridDistribution& f, int i, int j, double phi);

/// min over a uniform phi grid on [0, 2 pi) of int f <v>^{-5} |(v_i^2 - v_j^2) cos phi + 2 v_i v_j sin phi|^2.
double s_f_functional(const GridDistribution& f, int i, int j, int n_phi = 64);

/// Verdicts for the lower bound on Delta_f, the two pressure bounds with
/// empirical constants, the trace reduction, the S_f bound and the
/// small-set estimate.
std::vector<InequalityVerdict> check_prop33(std::span<const GridDistribution> members,
                                            std::span<const MemberMetrics> metrics, double entropy_bound,
                                            const std::string& digest);

/// Smallest eigenvalue of Hess U(v) for U = |v|^2 / 2 + (3/2) log(1 + |v|^2).
double hessian_min_eigenvalue(const Vec3& v);

InequalityVerdict check_bakry_emery(std::size_t samples = 10000, std::uint64_t seed = 1);

enum class CutoffKind { kIndicator, kSmooth };

CutoffKind parse_cutoff(const std::string& name);

/// chi(r): indicator of r <= 1, or a smooth step equal to 1 on r <= 1/2 and 0 on r >= 1.
double cutoff_profile(double r, CutoffKind kind);

struct CoercivityTerms {
  double integral = 0.0;  // I
  double leading = 0.0;   // M0^{1 - gamma/2} M2^{gamma/2} M_{l + gamma}
  double remainder = 0.0;  // M2 M_{l - 2 + gamma} + (M2 / M0)^{l/2 - 1 + gamma} M0 M2
};

CoercivityTerms coercivity_terms(const GridDistribution& f, double gamma, double eta, double l, CutoffKind kind);

/// Direct pair sum of the integrand over {|v - w| < |w|} and {|v - w| < |v|}.
double coercivity_inner_region(const GridDistribution& f, double gamma, double eta, double l, CutoffKind kind);

/// Two verdicts: the fitted (K, C) with K > 0 over `members`, and the sign of
/// the inner-region part over `inner_members` (direct O(N^6) sum, so these
/// should live on coarse grids).
std::vector<InequalityVerdict> check_coercivity_lemma(std::span<const GridDistribution> members,
                                                      std::span<const GridDistribution> inner_members, double gamma,
                                                      double eta, double l, CutoffKind kind);

struct InterpolationParams {
  double r = 5.0 / 3.0;
  double alpha = 0.0;
  bool stretched = false;
  double s = 1.0;
  double kappa = 0.1;
  double kappa1 = 0.2;
  double kappa2 = 0.5;
};

/// theta(r, alpha) = (9 (r - 1) + 2 alpha) / (3 - r)
double interpolation_theta(double r, double alpha);

/// lhs = C_lemma * bracket, rhs = weighted int f |log f|; empirical constant = rhs / bracket.
InequalityVerdict check_interpolation_lemma(const GridDistribution& f, const InterpolationParams& params);

/// Row divergence of a(z) by central differences against b(z) = -2 |z|^gamma z.
InequalityVerdict check_b_field_consistency(double gamma, std::size_t samples = 1000, std::uint64_t seed = 1);

}  // namespace landau
