#pragma once

#include <cstddef>
#include <functional>

namespace nb {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to pre-sized per-index slots so downstream reductions stay in
// index order regardless of the worker count.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace nb
