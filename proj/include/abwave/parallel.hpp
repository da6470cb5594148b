#pragma once

#include <cstddef>
#include <functional>

namespace abwave {

// Worker count: ABWAVE_THREADS if set to a positive integer, else hardware concurrency.
unsigned thread_count();

// Override for the current process (0 restores the environment/hardware default).
void set_thread_count(unsigned n);

// Runs body(i) for i in [0, n). Each index must write only its own output slot;
// callers reduce afterwards in index order so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace abwave
