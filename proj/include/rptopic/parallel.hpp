#pragma once

#include <cstddef>
#include <functional>

namespace rptopic {

// 0 means: RPTOPIC_THREADS if set, otherwise hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

// Splits [0, n) into contiguous chunks, one per worker. The chunk boundaries
// depend only on n and the worker count.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t begin, std::size_t end,
                                           std::size_t worker)>& body);

}  // namespace rptopic
