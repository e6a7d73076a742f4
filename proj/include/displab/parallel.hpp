#pragma once

#include <cstddef>
#include <functional>

namespace displab {

// Worker count: DISPLAB_THREADS if set, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) on the worker pool. Callers write results
// into slot i and reduce in index order, which keeps outputs independent of
// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace displab
