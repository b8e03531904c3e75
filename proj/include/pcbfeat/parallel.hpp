#pragma once

#include <cstddef>
#include <cstdint>

namespace pcbfeat {

/// Selects the serial reference loop or the OpenMP fan-out. Both produce
/// identical output: every parallel loop in the library writes to a slot
/// owned by its index and never reduces across iterations.
enum class Exec { serial, parallel };

/// Sets the OpenMP team size used by Exec::parallel loops (<= 0 keeps the
/// runtime default). Returns the previous setting.
int set_worker_count(int workers);
int worker_count();

template <typename Fn>
void parallel_for(Exec exec, std::int64_t n, Fn&& fn) {
    if (exec == Exec::serial) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace pcbfeat
