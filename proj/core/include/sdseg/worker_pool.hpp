#pragma once

#include <cstddef>
#include <functional>

namespace sdseg {

/// Runs fn(0) ... fn(count - 1) on at most `jobs` threads (jobs <= 0 means
/// hardware concurrency). Indices are claimed dynamically, so callers must
/// write results by index. If any call throws, the exception from the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

int resolve_jobs(int jobs);

}  // namespace sdseg
