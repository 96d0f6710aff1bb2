#ifndef GAPFORGE_PARALLEL_HPP
#define GAPFORGE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace gapforge {

// GAPFORGE_THREADS if set to a positive integer, else hardware concurrency
// (at least 1).
int worker_count();

// Calls fn(i) for i in [0, count) on up to `threads` workers. fn must write
// only to its own slot; the first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace gapforge

#endif
