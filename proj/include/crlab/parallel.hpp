#pragma once

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crlab {

/// Runs body(i) for i in [0, n) on the OpenMP team. The first exception
/// thrown by any iteration is rethrown on the calling thread after the loop.
template <typename Body>
void parallel_for(long n, Body&& body) {
  std::exception_ptr first;
  std::mutex guard;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace crlab
