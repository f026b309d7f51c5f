#pragma once

#include <cstddef>
#include <cstdint>

namespace semijulia {

// Every data-parallel kernel has a serial reference path. Both paths compute
// per-index results into fixed slots and reduce in index order, so the two
// produce bit-identical output for any thread count.
enum class Exec { Serial, Parallel };

// Caps OpenMP worker count for subsequent parallel kernels (0 = runtime default).
void set_max_threads(int n);
int max_threads();

template <class Fn>
void for_each_index(Exec exec, std::int64_t n, Fn&& fn) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) fn(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace semijulia
