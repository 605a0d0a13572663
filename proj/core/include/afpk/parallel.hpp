#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace afpk {

// Worker count used by parallel_for; 0 restores the default (hardware concurrency).
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for i in [0, n) on contiguous static chunks, so the
// assignment of indices to threads depends only on n and thread_count().
// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace afpk
