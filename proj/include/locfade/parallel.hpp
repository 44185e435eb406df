#pragma once

#include <cstddef>
#include <functional>

namespace locfade {

/// Worker count: hardware concurrency, capped by LOCFADE_THREADS if set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Work is
/// split into contiguous blocks; callers write results by index so the
/// outcome never depends on the schedule. The exception thrown for the
/// smallest index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace locfade
