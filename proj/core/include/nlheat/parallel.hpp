#pragma once

#include <cstddef>
#include <functional>

namespace nlheat {

/// Worker count used by parallel loops; 0 or 1 runs inline.
void set_num_threads(unsigned n);
unsigned num_threads();

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// visited by exactly one chunk, so results written per index are
/// independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace nlheat
