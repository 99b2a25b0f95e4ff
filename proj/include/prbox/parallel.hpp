#pragma once

#include <cstddef>
#include <functional>

namespace prbox {

/// Worker count for data-parallel loops: $PRBOX_WORKERS when set to a
/// positive integer, otherwise std::thread::hardware_concurrency().
std::size_t default_worker_count();

/// Calls body(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; callers write results by index, so output order
/// never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = default_worker_count());

}  // namespace prbox
