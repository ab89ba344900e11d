#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace canonsys {

/// Scheduling of independent per-index work. Serial is the reference path the
/// parallel kernels are tested against.
enum class Exec { Serial, Parallel };

/// Caps the OpenMP worker count (no-op without OpenMP). n <= 0 restores the default.
void set_thread_cap(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Each index must write only its own output slot.
/// The first exception thrown by any index is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(canonsys_parallel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace canonsys
