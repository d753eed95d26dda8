#pragma once

#include <cstddef>
#include <functional>

namespace xling {

/// Worker count from XLING_THREADS, or 1 when unset or invalid.
unsigned default_thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
/// so a body that writes only to its own slots gives schedule-independent results.
void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body,
                  unsigned threads = default_thread_count());

}  // namespace xling
