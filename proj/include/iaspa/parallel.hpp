#pragma once

#include <cstddef>
#include <functional>

namespace iaspa {

/// Runs fn(i) for i in [0, n) on `workers` threads (<=0 means hardware
/// concurrency). Static chunking; each index is processed exactly once, so
/// per-index output slots make results independent of the worker count.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace iaspa
