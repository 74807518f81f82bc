#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace landau {

/// Worker count used by every data-parallel loop in the library.
/// Defaults to LANDAU_LAB_THREADS when set, otherwise hardware concurrency.
int thread_count();
void set_thread_count(int threads);

/// Runs body(task) for task in [0, tasks). Tasks are handed out dynamically;
/// bodies must write to disjoint memory.
void parallel_for(std::size_t tasks, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation. The association order depends only on the
/// length of the input, so results are reproducible.
double pairwise_sum(std::span<const double> values);

/// Evaluates partial(block) for every block in parallel and combines the
/// partials with pairwise_sum. Bit-reproducible for any thread count as long
/// as the block decomposition is fixed by the caller.
double parallel_block_sum(std::size_t blocks, const std::function<double(std::size_t)>& partial);

/// Vector-valued variant: each block fills `width` partials.
std::vector<double> parallel_block_sum(std::size_t blocks, std::size_t width,
                                       const std::function<void(std::size_t, double*)>& partial);

}  // namespace landau
