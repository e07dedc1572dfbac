#ifndef DGFEM_EXECUTION_HPP
#define DGFEM_EXECUTION_HPP

namespace dgfem {

/// Serial runs the plain reference loops; Parallel runs the OpenMP kernels.
/// Both produce bitwise-identical results: parallel workers fill private
/// buffers over contiguous item ranges that are merged in range order, so the
/// accumulation order matches the serial loops exactly.
enum class ExecMode { Serial, Parallel };

struct Execution {
  ExecMode mode = ExecMode::Parallel;
  int threads = 0; // 0 = OpenMP runtime default

  static Execution serial() { return {ExecMode::Serial, 1}; }
  static Execution parallel(int threads = 0) { return {ExecMode::Parallel, threads}; }
};

/// Number of worker threads an Execution resolves to on this machine.
int resolved_threads(const Execution& exec);

} // namespace dgfem

#endif
