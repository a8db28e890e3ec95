#pragma once

#include <cstddef>
#include <functional>

namespace degenvi {

/// Worker count: DEGENVI_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads using
/// contiguous blocks. Callers keep results deterministic by writing to
/// per-index slots and reducing in index order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace degenvi
