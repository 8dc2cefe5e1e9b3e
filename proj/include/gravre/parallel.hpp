#pragma once

#include <cstddef>
#include <functional>

namespace gravre {

/// GRAVRE_JOBS if set and positive, else hardware concurrency (at least 1).
int default_jobs();

/// Run fn(i) for i in [0, n) on up to `jobs` threads (0 = default_jobs()).
/// Each index is visited exactly once; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int jobs = 0);

}  // namespace gravre
