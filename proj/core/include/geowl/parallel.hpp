#pragma once

#include <functional>

namespace geowl {

/// Effective worker count: hardware concurrency capped by the
/// GEOWL_THREADS environment variable (when set and positive).
int max_threads();

/// Runs fn(0..n-1) across up to `threads` workers (0 = max_threads()).
/// Callers merge results into per-index slots, so output never depends
/// on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace geowl
