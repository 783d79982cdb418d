#pragma once

#include <cstdint>
#include <functional>

namespace shapesuite {

/// Worker cap: SHAPESUITE_THREADS when set (>=1), else the hardware
/// concurrency.
int thread_cap();

/// Runs fn(0..count-1); indices are distributed over threads, so fn must
/// only touch per-index state. Falls back to serial for small counts.
void parallel_for(int64_t count, const std::function<void(int64_t)>& fn);

}  // namespace shapesuite
