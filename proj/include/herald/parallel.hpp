#ifndef HERALD_PARALLEL_HPP
#define HERALD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace herald {

/// Worker count: hardware concurrency, capped by HERALD_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) across worker_count() threads. Each index is
/// visited exactly once; callers write results into preallocated slots so
/// output order is independent of scheduling. The first exception thrown by
/// any body is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace herald

#endif  // HERALD_PARALLEL_HPP
