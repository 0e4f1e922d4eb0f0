#pragma once

#include <cstddef>
#include <functional>

namespace frozenperc {

/// Calls task(index, worker) for every index in [0, count) on up to
/// `threads` workers (0 means one per hardware thread). Indices are handed
/// out dynamically, so tasks must only write to per-index slots. The first
/// exception thrown by a task is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t, unsigned)>& task);

/// Worker count actually used for `requested` threads and `count` tasks.
unsigned effective_threads(unsigned requested, std::size_t count);

}  // namespace frozenperc
