#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace wkbq {

/// Which implementation a kernel should use. `serial` is the reference path
/// kept for testing; `parallel` uses OpenMP when the library was built with it.
enum class Execution { serial, parallel };

inline bool openmp_enabled() noexcept {
#if defined(_OPENMP)
    return true;
#else
    return false;
#endif
}

inline int max_threads() noexcept {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

/// Runs fn(i) for i in [0, n). Iterations must be independent and write only
/// to their own slot; results are then identical to the serial loop.
/// Nested calls (already inside a parallel region) run serially. The first
/// exception thrown by an iteration is rethrown after the loop.
template <class Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn, Execution exec = Execution::parallel,
                  std::ptrdiff_t min_parallel = 2, bool dynamic = false) {
#if defined(_OPENMP)
    if (exec == Execution::parallel && n >= min_parallel && !omp_in_parallel() && omp_get_max_threads() > 1) {
        std::exception_ptr error;
        std::ptrdiff_t error_index = n;
        std::mutex mutex;
        auto guarded = [&](std::ptrdiff_t i) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        };
        if (dynamic) {
#pragma omp parallel for schedule(dynamic, 1)
            for (std::ptrdiff_t i = 0; i < n; ++i) guarded(i);
        } else {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < n; ++i) guarded(i);
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#else
    (void)exec;
    (void)min_parallel;
    (void)dynamic;
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

}  // namespace detail
}  // namespace wkbq
