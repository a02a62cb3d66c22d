#pragma once

#include <cstddef>
#include <functional>

namespace inflap {

// Worker count: INFLAP_THREADS if set, else hardware concurrency (capped).
int worker_count();

// Runs fn(begin, end, worker) on a fixed partition of [0, n) into
// worker_count() contiguous chunks. The partition depends only on n and the
// worker count, never on scheduling, so schedule-independent kernels give
// identical results for any thread count.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, int)>& fn);

}  // namespace inflap
