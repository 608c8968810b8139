#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lcpp {

// Runtime switch for the OpenMP code paths. Defaults to on when compiled
// with OpenMP. The plain loops in lcpp::reference ignore it.
void set_parallel(bool on);
bool parallel_enabled();

namespace detail {

inline constexpr std::size_t kReduceBlock = 2048;
inline constexpr std::size_t kParallelCutoff = 16384;

// Folds partials pairwise in place: (p0+p1), (p2+p3), ... until one value
// remains. The combine order depends only on the block count, never on the
// thread count.
double pairwise_fold(std::vector<double>& partials);

// Deterministic sum of fn(lo, hi) over fixed-size blocks of [0, n). fn must
// be pure; blocks are scheduled statically when run in parallel, and the
// partials are combined by pairwise_fold, so the result is identical for
// any number of threads.
template <class Fn>
double blocked_sum(std::size_t n, Fn&& fn) {
  if (n == 0) return 0.0;
  const std::size_t nb = (n + kReduceBlock - 1) / kReduceBlock;
  if (nb == 1) return fn(std::size_t{0}, n);
  std::vector<double> part(nb);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel_enabled() && n >= kParallelCutoff)
#endif
  for (long b = 0; b < static_cast<long>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t hi = std::min(n, lo + kReduceBlock);
    part[static_cast<std::size_t>(b)] = fn(lo, hi);
  }
  return pairwise_fold(part);
}

}  // namespace detail
}  // namespace lcpp
