#pragma once

#include <cstddef>
#include <functional>

namespace lspec {

// Thread count: LSPEC_THREADS if set, else hardware concurrency (>= 1).
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, n). Each index owns its output slot, so results
// do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lspec
