#pragma once

#include <cstddef>
#include <functional>

namespace topospec {

// Worker count: TOPOSPEC_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Dynamic work distribution over [0, n); fn must be safe to call concurrently.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace topospec
