#pragma once

#include <cstddef>
#include <functional>

namespace graphreason {

/// Runs fn(0..count-1) on up to `jobs` threads. The first exception thrown by
/// any call is rethrown after all workers stop; remaining indices are skipped.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

} // namespace graphreason
