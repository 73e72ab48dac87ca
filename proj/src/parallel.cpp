#include "starflow/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace starflow {

namespace {
std::atomic<int> g_max_threads{1};

template <typename BlockFn>
void run_blocks(std::size_t n, int threads, const BlockFn& block_fn) {
  const std::size_t nblocks = (n + kParallelBlock - 1) / kParallelBlock;
  if (threads <= 1 || nblocks < 2) {
    for (std::size_t b = 0; b < nblocks; ++b)
      block_fn(b, b * kParallelBlock, std::min(n, (b + 1) * kParallelBlock));
    return;
  }
  const int workers = static_cast<int>(std::min<std::size_t>(threads, nblocks));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      block_fn(b, b * kParallelBlock, std::min(n, (b + 1) * kParallelBlock));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}
}  // namespace

int max_threads() { return g_max_threads.load(); }

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  run_blocks(n, max_threads(),
             [&](std::size_t, std::size_t begin, std::size_t end) { body(begin, end); });
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kParallelBlock - 1) / kParallelBlock;
  std::vector<double> parts(nblocks, 0.0);
  run_blocks(n, max_threads(), [&](std::size_t b, std::size_t begin, std::size_t end) {
    parts[b] = partial(begin, end);
  });
  double acc = 0.0;
  for (double p : parts) acc += p;
  return acc;
}

double parallel_max(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial) {
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kParallelBlock - 1) / kParallelBlock;
  std::vector<double> parts(nblocks, 0.0);
  run_blocks(n, max_threads(), [&](std::size_t b, std::size_t begin, std::size_t end) {
    parts[b] = partial(begin, end);
  });
  double acc = parts[0];
  for (double p : parts) acc = std::max(acc, p);
  return acc;
}

}  // namespace starflow
