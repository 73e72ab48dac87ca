#pragma once

#include <cstddef>
#include <functional>

namespace starflow {

/// Global cap on worker threads for data-parallel loops. Defaults to 1,
/// which is the bit-reproducibility reference; any other value produces
/// identical results because reductions combine fixed-size blocks in block
/// order regardless of which thread ran them.
int max_threads();
void set_max_threads(int n);

/// Number of elements per scheduling block. Ranges shorter than two blocks
/// run inline on the calling thread.
inline constexpr std::size_t kParallelBlock = 16384;

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Sum / max of per-block partial reductions; `partial` maps [begin,end) to
/// one double. Partials are combined serially in block order.
double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial);
double parallel_max(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial);

}  // namespace starflow
