#pragma once

#include <functional>

namespace lutforge {

// Worker cap for row-parallel loops. 0 = hardware concurrency. Falls back to
// the LUTFORGE_THREADS environment variable when never set explicitly.
void set_thread_count(int n);
int thread_count();

// Runs fn(row) for row in [0, rows). Each row writes disjoint output, so the
// result is independent of the worker count.
void parallel_rows(int rows, const std::function<void(int)>& fn);

} // namespace lutforge
