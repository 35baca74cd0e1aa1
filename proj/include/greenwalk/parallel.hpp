#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

#ifdef GREENWALK_HAVE_OPENMP
#include <omp.h>
#endif

namespace greenwalk {

// Data-parallel kernels write to disjoint indices only, so results are
// independent of the schedule and of the thread count. Exceptions are
// captured per index and the lowest-index one is rethrown, which keeps
// failure behaviour identical between the serial and parallel paths.

template <typename Fn>
void serial_for(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
#ifdef GREENWALK_HAVE_OPENMP
  std::vector<std::exception_ptr> errs(n);
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errs[static_cast<std::size_t>(i)] = std::current_exception();
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) {
    for (std::size_t i = 0; i < n; ++i) {
      if (errs[i]) std::rethrow_exception(errs[i]);
    }
  }
#else
  serial_for(n, std::forward<Fn>(fn));
#endif
}

// Runtime switch used by the experiment drivers; 0 threads = library default.
void set_parallel_threads(int threads);
int max_parallel_threads();

}  // namespace greenwalk
