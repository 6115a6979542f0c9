#pragma once

#include <cstddef>
#include <functional>

namespace dedekind {

// Process-wide worker count for internal parallel loops; 0 means
// std::thread::hardware_concurrency().
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, count) on up to thread_count() threads. Work is
// split into fixed items so any reduction over items in index order is
// independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dedekind
