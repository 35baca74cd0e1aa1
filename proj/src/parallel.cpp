#include "greenwalk/parallel.hpp"

namespace greenwalk {

void set_parallel_threads(int threads) {
#ifdef GREENWALK_HAVE_OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_parallel_threads() {
#ifdef GREENWALK_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace greenwalk
