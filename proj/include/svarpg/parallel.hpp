#pragma once

#include <cstddef>
#include <functional>

namespace svarpg {

/// Worker count: hardware concurrency, capped by the SVARPG_THREADS environment variable.
std::size_t worker_count();

/// Runs body(i) for i in [0, n); chunks are distributed over worker_count() threads.
/// The exception of the lowest-indexed failing chunk is rethrown on the caller's thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace svarpg
