#pragma once

#include <cstdlib>
#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hflow {

// Execution policy for node-wise kernels. Serial is the reference path;
// tests compare it against Parallel bit-for-bit (kernels have no
// cross-node reductions, so results are identical).
enum class Execution { Serial, Parallel };

inline int thread_cap() {
  static int cap = [] {
    if (const char* s = std::getenv("HFLOW_THREADS")) {
      int v = std::atoi(s);
      if (v > 0) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }();
  return cap;
}

template <class F>
void for_each_node(int n, Execution exec, F&& f) {
  if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_cap())
#endif
    for (int i = 0; i < n; ++i) f(i);
  } else {
    for (int i = 0; i < n; ++i) f(i);
  }
}

}  // namespace hflow
