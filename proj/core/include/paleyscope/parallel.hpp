#pragma once

#include <cstddef>
#include <functional>

namespace paleyscope {

/// Worker count used by parallel_for. 0 restores the default, which reads
/// PALEY_THREADS and otherwise falls back to hardware_concurrency().
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, count) on a static partition. Each index is
/// visited exactly once; the first exception thrown by any worker is
/// rethrown on the caller's thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace paleyscope
