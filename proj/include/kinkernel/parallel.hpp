#ifndef KINKERNEL_PARALLEL_HPP
#define KINKERNEL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace kinkernel {

/// Worker count: KINKERNEL_THREADS when set, hardware concurrency otherwise.
int thread_count();

/// Runs fn(i) for i in [0, n) on the worker pool; rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace kinkernel

#endif
