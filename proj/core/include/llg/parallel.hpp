#pragma once

#include <cstdint>
#include <functional>

namespace llg {

// Worker count: LLG_NUM_THREADS if set to a positive integer, otherwise
// hardware_concurrency. Queried once per process.
int thread_count();

// Splits [0, count) into contiguous chunks and runs body(begin, end) on each,
// possibly concurrently. Chunk boundaries depend only on count and the worker
// count, and each index is visited exactly once, so pointwise maps stay
// bit-deterministic. Reductions must not use this; keep them serial.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace llg
