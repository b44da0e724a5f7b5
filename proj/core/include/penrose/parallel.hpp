#pragma once

#include <cstddef>
#include <functional>

namespace penrose {

/// Global worker count for batch-parallel sections (walk batches, patch
/// dualization). 0 means "hardware concurrency". Reductions are always
/// combined in fixed index order, so results do not depend on this value.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(begin, end) over disjoint chunks of [0, n) on worker threads.
/// Chunk boundaries depend only on n, never on the thread count, so any
/// index-addressed output is deterministic.
void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace penrose
