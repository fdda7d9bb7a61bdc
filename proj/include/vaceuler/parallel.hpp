#pragma once

#include <cstddef>
#include <functional>

namespace vaceuler::par {

// Data-parallel width. Defaults to 1; VACEULER_THREADS caps it. Results are
// bit-identical for any width: work is split into fixed-size blocks and
// reductions combine per-block partials in block order.
int max_threads();
void set_threads(int n); // overrides the env value (tests)

// f(i0, i1) processes the half-open index range [i0, i1).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& f);

// Sum of g(i) over [0, n) with a schedule-independent summation order.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& g);

} // namespace vaceuler::par
