#pragma once

#include <cstddef>
#include <functional>

namespace driftlab {

/// Worker count: DRIFTLAB_WORKERS when set, otherwise hardware concurrency.
int worker_count();

/// Run fn(0..n-1) on a small thread pool. Callers own any result ordering;
/// writing into pre-sized slots by index keeps reductions deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace driftlab
