#pragma once

#include <cstddef>
#include <functional>

namespace kbo {

/// Worker count from KBO_WORKERS, else the hardware concurrency (>= 1).
std::size_t default_worker_count();

/// Calls task(i) for every i in [0, n_tasks) on up to `workers` threads.
/// Tasks must write to disjoint outputs; the first exception thrown by any
/// task is rethrown after all workers have joined.
void parallel_for(std::size_t n_tasks, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace kbo
