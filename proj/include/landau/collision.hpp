#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "landau/distribution.hpp"
#include "landau/functionals.hpp"

namespace landau {

class FftFluxEngine;
class PairKernelTable;

/// Conservative pairwise Landau operator on a grid.
///
/// The flux J_k = f_k sum_l w f_l a(v_k - v_l)(s_k - s_l) is assembled from
/// the shared score field and Q = -sum_a D_a^T J_a, where D is the grid
/// gradient. Hence sum_k w Q_k phi_k = -w sum_k J_k . (D phi)_k for every
/// nodal phi: the collision invariants (whose discrete gradients are exact)
/// are conserved to roundoff and <Q, log f> = -D(f).
class CollisionOperator {
 public:
  CollisionOperator(const VelocityGrid& grid, double gamma, PairBackend backend);

  const VelocityGrid& grid() const noexcept { return grid_; }
  double gamma() const noexcept { return gamma_; }
  PairBackend backend() const noexcept { return backend_; }

  VectorField flux(const GridDistribution& f) const;

  struct Evaluation {
    std::vector<double> q;
    double dissipation = 0.0;  // w sum_k J_k . s_k
  };
  Evaluation evaluate(const GridDistribution& f) const;
  std::vector<double> apply(const GridDistribution& f) const { return evaluate(f).q; }

 private:
  VelocityGrid grid_;
  double gamma_;
  PairBackend backend_;
  std::shared_ptr<const PairKernelTable> table_;
  std::shared_ptr<const FftFluxEngine> engine_;
};

std::vector<double> collision_operator(const GridDistribution& f, double gamma,
                                       PairBackend backend = PairBackend::kDirect);

/// w sum_k a_k b_k
double weak_pairing(const VelocityGrid& grid, std::span<const double> a, std::span<const double> b);

/// Smooth test function with analytic derivatives.
struct TestFunction {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;
};

/// int Q(f,f) phi from the symmetric second-order weak form
/// (a : Hess phi plus the b-term), evaluated with FFT convolutions.
double weak_form_convolution(const GridDistribution& f, double gamma, const TestFunction& phi);

/// Non-divergence form Q = (a*f) : Hess f - (c*f) f, with c*f = -8 pi f at
/// gamma = -3. Uses grid second differences; a cross-check only.
std::vector<double> collision_operator_convolution(const GridDistribution& f, double gamma);

}  // namespace landau
