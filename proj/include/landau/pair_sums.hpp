#pragma once

#include "landau/distribution.hpp"
#include "landau/kernel_table.hpp"

namespace landau {

/// Direct O(N^6) pair sums over all node pairs k != l. Outer nodes are split
/// into fixed blocks (one x-line each) whose partials are combined by
/// pairwise summation, so results do not depend on the thread count.

/// 1/2 sum_{k != l} w^2 f_k f_l (s_k - s_l)^T a(v_k - v_l) (s_k - s_l).
double pair_projection_sum(const GridDistribution& f, const PairKernelTable& table);

/// 1/2 sum_{k != l} w^2 f_k f_l |v_k - v_l|^gamma sum_{i<j} R_ij(v_k, v_l)^2.
double pair_crossform_sum(const GridDistribution& f, const PairKernelTable& table);

/// Flux J_k = f_k sum_{l != k} w f_l a(v_k - v_l) (s_k - s_l).
VectorField pair_flux(const GridDistribution& f, const PairKernelTable& table);

}  // namespace landau
