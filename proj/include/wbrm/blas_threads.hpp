#pragma once

// OpenBLAS sizes its thread pool when the library loads, before main runs,
// so the env var cannot be set from inside the process; use the API instead.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace wbrm {

/// Pin BLAS to one thread; the task-level parallelism already covers the
/// cores and nested BLAS threads only thrash.
inline void limit_blas_threads() {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
}

}  // namespace wbrm
