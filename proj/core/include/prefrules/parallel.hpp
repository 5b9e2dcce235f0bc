#pragma once

#include <cstddef>
#include <functional>

namespace prefrules {

/// Runs body(i) for i in [0, count) on up to `jobs` threads (jobs <= 1 runs
/// inline). The first exception thrown by any task is rethrown after all
/// workers have stopped.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace prefrules
