#pragma once

#include <cstddef>
#include <functional>

namespace volrough {

/// Worker count: VOLROUGH_THREADS if set to a positive integer, else hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Indices are claimed dynamically,
/// so fn must not depend on scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace volrough
