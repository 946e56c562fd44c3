#pragma once

#include <cstddef>
#include <functional>

namespace gevrey {

/// Worker count from GEVREY_EVP_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// Callers write results into slot i, so the outcome does not depend on
/// scheduling. If any body throws, the exception with the lowest index seen
/// is rethrown after all workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gevrey
