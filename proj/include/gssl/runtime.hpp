#pragma once

// Process-level BLAS workaround for executables. OpenBLAS reads
// OPENBLAS_CORETYPE only when it is loaded, so when the self-check fails
// the process sets a kernel family the CPU supports and re-executes itself
// once.

#include <cstdlib>
#include <unistd.h>

#include "gssl/lapack.hpp"

namespace gssl {

inline void ensure_blas_kernels(char** argv) {
  if (lapack::kernels_ok()) return;
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr || std::getenv("GSSL_BLAS_REEXEC") != nullptr) return;
  const char* core = "Nehalem";
  if (__builtin_cpu_supports("avx512f")) core = "SkylakeX";
  else if (__builtin_cpu_supports("avx2")) core = "Haswell";
  ::setenv("OPENBLAS_CORETYPE", core, 1);
  ::setenv("GSSL_BLAS_REEXEC", "1", 1);
  ::execv("/proc/self/exe", argv);
  // exec failed: carry on; the numerical routines will report the fault.
}

}  // namespace gssl
