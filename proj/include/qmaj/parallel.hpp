#pragma once

#include <cstddef>
#include <functional>

namespace qmaj {

// Worker count: QMAJ_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on n and thread_count(), so results that are written per index
// are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace qmaj
