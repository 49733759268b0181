#pragma once

#include <cstddef>
#include <functional>

namespace hb {

// Worker count used by data-parallel sweeps. 0 restores the default
// (hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for every i in [0, n). Each index is visited exactly once and
// callers write results into per-index slots, so output does not depend on the
// worker count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hb
