// Minimal fork-join helper for independent work items.
#pragma once

#include <cstddef>
#include <functional>

namespace sgmeta {

/// Worker count: `requested` if positive, else the SG_THREADS environment
/// variable if set, else the hardware concurrency.
int resolve_thread_count(int requested = 0);

/// Calls body(i) for i in [0, n) on up to `threads` workers. Items are
/// claimed dynamically; the first exception thrown is rethrown after all
/// workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace sgmeta
