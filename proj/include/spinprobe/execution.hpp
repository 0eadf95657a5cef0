#pragma once

#include <cstddef>
#include <exception>
#include <string_view>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spinprobe {

/// serial is the reference loop; openmp must produce bit-identical results.
enum class Backend { serial, openmp };

struct Execution {
  Backend backend = Backend::openmp;
  int threads = 0;  // 0: OpenMP default

  static Execution serial() { return {Backend::serial, 1}; }
  static Execution parallel(int threads = 0) { return {Backend::openmp, threads}; }
};

std::string_view to_string(Backend b);

/// Run body(i) for i in [0, n).  Every index writes only its own output slot, so results do not depend on
/// scheduling.  If any iteration throws, the exception from the lowest failing index is rethrown after the loop.
template <typename Body>
void parallel_for(std::size_t n, const Execution& exec, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  bool any_error = false;

  if (exec.backend == Backend::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        any_error = true;
        break;
      }
    }
  } else {
#ifdef _OPENMP
    const int threads = exec.threads > 0 ? exec.threads : omp_get_max_threads();
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(threads) reduction(|| : any_error)
    for (long long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        any_error = true;
      }
    }
#else
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        any_error = true;
        break;
      }
    }
#endif
  }

  if (any_error)
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
}

}  // namespace spinprobe
