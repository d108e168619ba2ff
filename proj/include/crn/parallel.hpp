#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crn::par {

// Job count used by parallel_for. 0 means "use the OpenMP default".
int jobs();
void set_jobs(int n);

// Serial reference path. Kernels write only to index-addressed slots, so the
// parallel path below must produce bit-identical results.
template <class F>
void serial_for(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
    const int j = jobs();
    if (j != 1 && n > 1) {
        if (j > 0) {
#pragma omp parallel for schedule(static) num_threads(j)
            for (long long i = 0; i < static_cast<long long>(n); ++i)
                body(static_cast<std::size_t>(i));
        } else {
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < static_cast<long long>(n); ++i)
                body(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    serial_for(n, body);
}

}  // namespace crn::par
