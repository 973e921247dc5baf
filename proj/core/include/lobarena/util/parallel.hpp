#pragma once

#include <cstddef>
#include <functional>

namespace lobarena {

/// Worker cap for stages that may fan out (per-day simulation, per-archetype
/// training). Reads LOB_ARENA_THREADS once; defaults to hardware concurrency.
unsigned thread_cap();

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Work items must not
/// share mutable state. Exceptions are captured and the first one rethrown
/// after all workers join.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace lobarena
