#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace delaystab {

/// Worker count for `requested` (0 = automatic). The DELAYSTAB_THREADS
/// environment variable caps the result in both cases.
unsigned resolve_threads(unsigned requested = 0);

/// Runs fn(i) for i in [0, n) on up to `threads` workers with a static
/// block partition. If any call throws, the exception from the lowest
/// failing index is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace delaystab
