#pragma once

#include <cstddef>
#include <functional>

namespace rbm {

// Number of worker threads: the requested count if positive, otherwise the
// hardware concurrency, in both cases capped by the RBM_THREADS environment variable.
unsigned worker_count(unsigned requested = 0);

// Runs body(i) for i in [0, n) on contiguous blocks, one block per worker.
// The assignment of indices to workers never affects what body(i) computes.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace rbm
