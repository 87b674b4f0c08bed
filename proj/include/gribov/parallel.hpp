#pragma once

#include <cstddef>
#include <functional>

namespace gribov {

// Worker count: GRIBOV_THREADS if set to a positive integer, otherwise
// hardware concurrency.
std::size_t thread_count();

// Calls body(i) for i in [0, count), split into contiguous chunks over
// thread_count() threads. body must only write to slots owned by i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace gribov
