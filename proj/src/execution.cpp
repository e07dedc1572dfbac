#include "dgfem/execution.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dgfem {

int resolved_threads(const Execution& exec) {
  if (exec.mode == ExecMode::Serial) {
    return 1;
  }
  if (exec.threads > 0) {
    return exec.threads;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace dgfem
