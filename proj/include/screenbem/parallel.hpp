// Deterministic chunked parallel loop; results must be written by index.
#pragma once

#include <cstddef>
#include <functional>

namespace screenbem {

/// Runs fn(0), ..., fn(n-1) on up to `threads` workers (0 = hardware count).
/// Iterations are partitioned into contiguous chunks, so per-index outputs are
/// identical to the serial loop; reductions must happen outside.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace screenbem
