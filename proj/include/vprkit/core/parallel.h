#pragma once

#include <cstddef>
#include <functional>

namespace vprkit {

// Number of worker threads: VPRKIT_THREADS if set to a positive integer,
// otherwise the hardware concurrency.
std::size_t thread_count();

// Runs fn(i) for i in [0, n) on up to thread_count() threads using
// contiguous chunks. fn must only write state owned by index i, which makes
// the result independent of the partitioning.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vprkit
