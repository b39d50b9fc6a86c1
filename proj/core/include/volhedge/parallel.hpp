#pragma once

#include <cstddef>
#include <functional>

namespace volhedge {

// Worker count: VOLHEDGE_THREADS if set, otherwise hardware concurrency.
int thread_count();

// Runs fn over [0, n) split into contiguous chunks, one per worker.
// Calls made from inside a worker run serially (no nested thread spawn),
// so callers can parallelize at the outermost level only.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn);

}  // namespace volhedge
