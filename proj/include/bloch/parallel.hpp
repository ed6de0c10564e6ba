#pragma once

#include <cstddef>
#include <functional>

namespace bloch {

// Global thread count for the OpenMP kernels. 1 = serial. Results are
// required to be independent of this setting; tests compare both paths.
void set_thread_count(int n);
int thread_count();

// Parallel loop over [0, n). Bodies must only write to disjoint state
// (typically slot i of a preallocated vector); merges stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace bloch
