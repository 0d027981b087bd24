#pragma once

#include <cstddef>
#include <functional>

namespace gemdpde {

/// Thread count from GEMDPDE_THREADS if set, otherwise hardware concurrency.
int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write
/// results into per-index slots so reductions stay in index order. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace gemdpde
