#pragma once

#include <cstddef>
#include <functional>

namespace ideaflow {

// Resolves 0 to IDEAFLOW_THREADS (env) or hardware concurrency.
int resolve_thread_count(int requested);

// Runs fn(i) for i in [0, n). Work is split into contiguous ranges, one per
// thread. Each call must write only to its own slot i, which makes the result
// independent of the thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace ideaflow
