#pragma once

#include <cstddef>
#include <functional>

namespace eigencond {

/// Number of worker threads: `requested` if > 0, else EIGENCOND_THREADS,
/// else hardware concurrency.
int resolve_thread_count(int requested);

/// Runs fn(i) for i in [0, count) on a pool of `threads` workers.
/// Work units must be independent; exceptions are rethrown on the caller
/// after all workers join (first one wins).
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace eigencond
