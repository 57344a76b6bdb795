#pragma once

// Process-level helpers: CPU clocks and the BLAS kernel guard.

namespace lhp {

/// CPU seconds consumed by the whole process (all threads).
double process_cpu_seconds();
/// Monotonic wall-clock seconds.
double wall_seconds();

/// Accumulates process CPU time over scoped sections.
class CpuStopwatch {
 public:
  void start() { t0_ = process_cpu_seconds(); }
  void stop() { total_ += process_cpu_seconds() - t0_; }
  double total() const { return total_; }

 private:
  double t0_ = 0.0;
  double total_ = 0.0;
};

/// OpenBLAS's automatic kernel selection returns bogus Cholesky failures on
/// some recent Xeon CPUs. If OPENBLAS_CORETYPE is unset (and LHP_NO_BLAS_OVERRIDE
/// is not set), pin a kernel matching the CPU features and re-execute the
/// program once so the library picks it up at load time. Call first in main.
void pin_blas_kernel(char** argv);

}  // namespace lhp
