#ifndef QUASIMODE_PARALLEL_HPP
#define QUASIMODE_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace quasimode {

/// Worker count: hardware concurrency, capped by QUASIMODE_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// is visited exactly once; callers write results into pre-sized slots so
/// output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation; the grouping depends only on the length.
double pairwise_sum(std::span<const double> values);

} // namespace quasimode

#endif
