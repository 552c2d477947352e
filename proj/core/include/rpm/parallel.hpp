#pragma once

#include <cstddef>
#include <functional>

namespace rpm {

/// Worker count: RPM_THREADS when set to a positive integer, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each index runs
/// exactly once; the first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace rpm
