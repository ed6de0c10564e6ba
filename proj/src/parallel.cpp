#include "bloch/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bloch {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }

int thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
#ifdef _OPENMP
    if (g_threads > 1) {
        #pragma omp parallel for schedule(dynamic, 16) num_threads(g_threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace bloch
