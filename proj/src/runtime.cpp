#include "lhp/runtime.hpp"

#include <cstdlib>
#include <ctime>
#include <unistd.h>

namespace lhp {

double process_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

double wall_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

void pin_blas_kernel(char** argv) {
  if (std::getenv("OPENBLAS_CORETYPE") || std::getenv("LHP_NO_BLAS_OVERRIDE")) return;
  __builtin_cpu_init();
  const char* core = __builtin_cpu_supports("avx2") ? "Haswell" : "Nehalem";
  setenv("OPENBLAS_CORETYPE", core, 1);
  execv("/proc/self/exe", argv);
  // exec failed: carry on with the automatic choice.
}

}  // namespace lhp
