#pragma once
// Thread-pool-free parallel loop. Work items write to disjoint slots and
// reductions happen sequentially afterwards, so results are bit-identical
// for any thread count.

#include <cstdint>
#include <functional>

namespace rconf {

/// Runs fn(i) for i in [0, n). threads == 0 uses the process default,
/// threads == 1 runs inline. Exceptions are rethrown on the caller thread.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn, int threads = 0);

/// Sets the process-wide default thread count (0 = hardware concurrency).
void set_default_threads(int threads);
int default_threads();

}  // namespace rconf
