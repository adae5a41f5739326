#pragma once

#include <cstddef>
#include <functional>

namespace chargedrop {

// Number of worker threads used by parallel loops. 0 means hardware concurrency.
// Set once per process (the CLI does this from --threads); default is 1.
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Runs body(i) for i in [begin, end). Calls made from inside a worker run
// serially. Indices are split into contiguous static
// blocks, one per thread, so each index is always handled the same way. Results
// written per index are therefore independent of the thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace chargedrop
