#pragma once

#include <cstddef>
#include <functional>

namespace blinkforge {

// Worker count: `requested` when non-zero, else BLINKFORGE_THREADS when set
// to a positive integer, else the hardware concurrency (at least 1).
std::size_t resolve_threads(std::size_t requested = 0);

// Calls fn(i) for every i in [0, n) on up to `threads` workers. Indices are
// claimed in increasing order. If any call throws, the exception from the
// smallest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace blinkforge
