#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "landau/distribution.hpp"
#include "landau/error.hpp"
#include "landau/functionals.hpp"
#include "landau/inequalities.hpp"
#include "landau/kernel_table.hpp"
#include "landau/parallel.hpp"

using namespace landau;

namespace {

const VelocityGrid& grid32() {
  static const VelocityGrid g(7.0, 32);
  return g;
}

const Corpus& small_corpus() {
  static const Corpus c = random_corpus(VelocityGrid(7.0, 20), 1, 8, 0.0);
  return c;
}

}  // namespace

TEST_CASE("verdict orientation and combination") {
  const auto a = make_verdict("x", 2.0, 1.0, 0.0);
  const auto b = make_verdict("x", 1.0, 1.5, 0.1);
  const auto c = make_verdict("x", 1.0, 1.05, 0.1);
  CHECK(a.holds);
  CHECK(!b.holds);
  CHECK(c.holds);
  CHECK(!make_verdict("x", NAN, 0.0, 1.0).holds);
  const InequalityVerdict parts[] = {a, c};
  const auto both = combine_verdicts("x", parts);
  CHECK(both.holds);
  CHECK(both.lhs == 1.0);
  CHECK(both.rhs == 1.05);
  const InequalityVerdict failing[] = {a, b};
  CHECK(!combine_verdicts("x", failing).holds);
}

TEST_CASE("Hessian of the log-weight potential: minimum 5/8 at |v|^2 = 3") {
  CHECK(hessian_min_eigenvalue({0.0, 0.0, 0.0}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::abs(hessian_min_eigenvalue({std::sqrt(3.0), 0.0, 0.0}) - 0.625) < 1e-12);
  CHECK(std::abs(hessian_min_eigenvalue({1.0, 1.0, 1.0}) - 0.625) < 1e-12);
  CHECK(hessian_min_eigenvalue({100.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-3));
  const auto v = check_bakry_emery(10000, 1);
  CHECK(v.holds);
  CHECK(v.empirical_constant >= 0.625 - 1e-12);
}

TEST_CASE("b is the row divergence of a") {
  for (double gamma : {-3.0, -2.0, -1.0, 0.0}) CHECK(check_b_field_consistency(gamma, 1000, 3).holds);
  const Vec3 b = landau_drift({1.0, 0.0, 0.0}, -3.0);
  CHECK(b[0] == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(b[1] == 0.0);
  const Vec3 z{0.3, -1.2, 0.7};
  const double r = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
  const Vec3 bz = landau_drift(z, -2.5);
  CHECK(bz[0] * z[0] + bz[1] * z[1] + bz[2] * z[2] == doctest::Approx(-2.0 * std::pow(r, -0.5)).epsilon(1e-14));
  const auto a = landau_matrix(z, -2.5);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i][0] * z[0] + a[i][1] * z[1] + a[i][2] * z[2]) < 1e-15);
}

TEST_CASE("score reconstruction on anisotropic Gaussians") {
  const GridDistribution f = anisotropic_gaussian(grid32(), 1.5, 1.0, 0.5);
  const auto v = check_prop31(f, 1e-3);
  CHECK(v.holds);
  CHECK(!v.vacuous);
  const auto r = reconstruct_score(f, 0, 2);
  REQUIRE(!r.degenerate);
  std::vector<double> exact(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec3 x = grid32().node(k);
    exact[k] = x[0] * x[2] * (1.0 / 1.5 - 1.0 / 0.5);
  }
  CHECK(masked_relative_error(f, r.rotation, exact) < 1e-3);

  const GridDistribution mu = reduced_maxwellian(grid32());
  const auto rm = reconstruct_score(mu, 0, 1);
  double worst = 0.0;
  for (double x : rm.rotation) worst = std::max(worst, std::abs(x));
  CHECK(worst < 1e-8);
}

TEST_CASE("equilibrium behaviour of the corpus checks") {
  Corpus c;
  c.members.push_back(reduced_maxwellian(VelocityGrid(7.0, 16)));
  const auto v = check_theorem_entropy(c, -3.0, PairBackend::kFft);
  CHECK(v.vacuous);
  CHECK(!v.note.empty());

  const MemberMetrics m = member_metrics(c.members[0], -3.0, PairBackend::kFft);
  const auto p32 = check_prop32(m);
  CHECK(p32.holds);
  CHECK(std::abs(p32.lhs) < 1e-6);
  CHECK(std::abs(p32.rhs) < 1e-6);

  const auto cc = check_cercignani(c.members[0], 3.0, -3.0, PairBackend::kFft);
  for (const auto& x : cc) CHECK(x.holds);
  CHECK(std::abs(weighted_relative_entropy(c.members[0])) < 1e-12);
}

TEST_CASE("explicit constants") {
  CHECK(delta_lower_bound(0.0) == doctest::Approx(std::pow(2.0, -34) / 81.0).epsilon(1e-15));
  CHECK(delta_lower_bound(0.0) == doctest::Approx(7.18e-13).epsilon(1e-3));
  CHECK(delta_lower_bound(-1.0) == delta_lower_bound(0.0));
  CHECK(delta_lower_bound(0.5) == doctest::Approx(delta_lower_bound(0.0) * std::exp(-8.0)).epsilon(1e-14));
  CHECK(kTailConstant == doctest::Approx(std::pow(2.0, 5.5)).epsilon(1e-15));
  CHECK(kProp32Constant == 3456.0);
  CHECK(interpolation_theta(5.0 / 3.0, 5.0) == doctest::Approx((9.0 + 15.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("partition functions against the radial oracle") {
  const GridDistribution mu = reduced_maxwellian(grid32());
  const double z1 = 4.0 * M_PI *
                    boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                        [](double r) {
                          return r * r * std::pow(1.0 + r * r, -1.5) * std::exp(-0.5 * r * r) /
                                 std::pow(2.0 * M_PI, 1.5);
                        },
                        0.0, 12.0, 15, 1e-14);
  CHECK(std::abs(partition_functions(mu).z1 - z1) < 1e-5);
  CHECK(z1 >= std::pow(2.0, -5.5));
  CHECK(z1 <= 1.0);
}

TEST_CASE("S_f: isotropy, refinement and the exact minimum") {
  const GridDistribution mu = reduced_maxwellian(grid32());
  double lo = INFINITY, hi = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double s = s_f_angular(mu, 0, 1, 2.0 * M_PI * k / 64.0);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(lo > 0.0);
  CHECK(hi - lo <= 1e-3 * hi);

  const GridDistribution f = anisotropic_gaussian(grid32(), 1.5, 1.0, 0.5);
  for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    const double s64 = s_f_functional(f, i, j, 64);
    const double s128 = s_f_functional(f, i, j, 128);
    CHECK(std::abs(s64 - s128) < 1e-6);
    CHECK(s_f_exact(f, i, j) <= s64 + 1e-12);
    CHECK(s_f_exact(f, i, j) >= 0.0);
  }
  CHECK_THROWS_AS(s_f_functional(f, 0, 1, 8), ConfigError);
}

TEST_CASE("pressure-tensor estimates on a small corpus") {
  const auto& c = small_corpus();
  const auto metrics = corpus_metrics(c.members, -3.0, PairBackend::kFft);
  const auto verdicts = check_prop33(c.members, metrics, 0.0, digest_hex(corpus_digest(c.members)));
  CHECK(verdicts.size() == 6);
  for (const auto& v : verdicts) {
    INFO(v.name);
    CHECK(v.holds);
  }
  for (const auto& m : metrics) {
    CHECK(m.delta >= delta_lower_bound(0.0));
    CHECK(m.delta <= 1.5);
    CHECK(check_prop32(m).holds);
    CHECK(m.z1 >= std::pow(2.0, -5.5));
    CHECK(m.z2 >= std::pow(2.0, -5.5));
    CHECK(m.z2 <= 1.0);
  }
  const auto ent = check_theorem_entropy(metrics, "x");
  CHECK(ent.holds);
  CHECK(ent.empirical_constant > 0.0);
  CHECK(check_l3_regularity(metrics, "x").holds);
}

TEST_CASE("Cercignani bound sweeps in R") {
  const GridDistribution& f = small_corpus().members[2];
  double previous = -INFINITY;
  for (double r : {1.5, 2.5, 4.0, 6.0}) {
    const auto v = check_cercignani(f, r, -3.0, PairBackend::kFft);
    REQUIRE(v.size() == 3);
    for (const auto& x : v) CHECK(x.holds);
    const double bound = truncated_entropy_bound(f, r);
    CHECK(bound >= previous - 1e-12);
    previous = bound;
  }
  CHECK_THROWS_AS(check_cercignani(f, 1.0), ConfigError);
}

TEST_CASE("coercivity: leading structure and the inner region") {
  const VelocityGrid g(7.0, 20);
  const GridDistribution mu = reduced_maxwellian(g);
  const CoercivityTerms t = coercivity_terms(mu, -3.0, 1.0, 4.0, CutoffKind::kSmooth);
  CHECK(std::isfinite(t.integral));
  CHECK(t.integral < 0.0);
  CHECK(t.leading > 0.0);
  const VelocityGrid coarse(7.0, 12);
  CHECK(coercivity_inner_region(reduced_maxwellian(coarse), -3.0, 1.0, 4.0, CutoffKind::kIndicator) <= 1e-12);
  CHECK(cutoff_profile(0.4, CutoffKind::kSmooth) == 1.0);
  CHECK(cutoff_profile(1.0, CutoffKind::kSmooth) == 0.0);
  CHECK(cutoff_profile(1.0, CutoffKind::kIndicator) == 1.0);
  CHECK(cutoff_profile(1.01, CutoffKind::kIndicator) == 0.0);
  const double mid = cutoff_profile(0.75, CutoffKind::kSmooth);
  CHECK((mid > 0.0 && mid < 1.0));
  CHECK_THROWS_AS(parse_cutoff("box"), ConfigError);

  const double smooth = coercivity_terms(mu, -3.0, 0.4, 4.0, CutoffKind::kSmooth).integral;
  const double sharp = coercivity_terms(mu, -3.0, 0.4, 4.0, CutoffKind::kIndicator).integral;
  const double smooth1 = coercivity_terms(mu, -3.0, 0.8, 4.0, CutoffKind::kSmooth).integral;
  const double sharp1 = coercivity_terms(mu, -3.0, 0.8, 4.0, CutoffKind::kIndicator).integral;
  CHECK(std::abs(smooth - sharp) < std::abs(smooth1 - sharp1));
}

TEST_CASE("interpolation lemma on mu and a mixture") {
  const GridDistribution mu = reduced_maxwellian(grid32());
  InterpolationParams p;
  const auto v = check_interpolation_lemma(mu, p);
  CHECK(v.holds);
  CHECK(v.empirical_constant <= 10.0);
  p.stretched = true;
  p.s = 1.0;
  const auto s = check_interpolation_lemma(small_corpus().members[0], p);
  CHECK(s.holds);
  p.r = 3.0;
  CHECK_THROWS_AS(check_interpolation_lemma(mu, p), ConfigError);
  p = {};
  p.stretched = true;
  p.kappa1 = p.kappa;
  CHECK_THROWS_AS(check_interpolation_lemma(mu, p), ConfigError);
}

TEST_CASE("corpus verdicts do not depend on the thread count") {
  const auto& c = small_corpus();
  set_thread_count(1);
  const auto a = check_theorem_entropy(c, -3.0, PairBackend::kFft);
  set_thread_count(2);
  const auto b = check_theorem_entropy(c, -3.0, PairBackend::kFft);
  set_thread_count(1);
  CHECK(a.lhs == b.lhs);
  CHECK(a.empirical_constant == b.empirical_constant);
}
