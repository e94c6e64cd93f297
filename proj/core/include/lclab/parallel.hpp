#pragma once

#include <cstdint>
#include <functional>

namespace lclab {

// Worker count: explicit set_thread_count() wins, then the LCLAB_THREADS
// environment variable, then the hardware count.
int thread_count();
void set_thread_count(int n);

// Runs fn(i) for i in [0, n) on a small pool with contiguous chunks.
// Work items must write to disjoint slots; reductions stay deterministic
// because callers fold the slots in index order afterwards.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace lclab
