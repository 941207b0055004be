#pragma once

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace so3ft {

/// Worker count used when a caller passes 0.
inline int default_threads() {
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

inline int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

inline int thread_index() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace so3ft
