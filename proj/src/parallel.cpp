#include "lcpp/parallel.hpp"

#include <atomic>

namespace lcpp {

namespace {
#ifdef _OPENMP
std::atomic<bool> g_parallel{true};
#else
std::atomic<bool> g_parallel{false};
#endif
}  // namespace

void set_parallel(bool on) {
#ifdef _OPENMP
  g_parallel.store(on, std::memory_order_relaxed);
#else
  (void)on;
#endif
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

namespace detail {

double pairwise_fold(std::vector<double>& partials) {
  std::size_t n = partials.size();
  while (n > 1) {
    std::size_t w = 0;
    for (std::size_t i = 0; i + 1 < n; i += 2) partials[w++] = partials[i] + partials[i + 1];
    if (n % 2 == 1) partials[w++] = partials[n - 1];
    n = w;
  }
  return n == 1 ? partials[0] : 0.0;
}

}  // namespace detail
}  // namespace lcpp
