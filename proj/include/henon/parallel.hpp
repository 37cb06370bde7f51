#ifndef HENON_PARALLEL_HPP
#define HENON_PARALLEL_HPP

#include <atomic>
#include <thread>
#include <vector>

namespace henon {

/// Shard [0, n) across a worker pool; f(i) must be safe to call concurrently
/// for distinct i.
template <typename F>
void parallel_for(int n, int workers, F&& f) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  auto run = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
  };
  std::vector<std::thread> pool;
  const int count = std::min(workers, n);
  pool.reserve(count - 1);
  for (int t = 1; t < count; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

inline int default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 4 : static_cast<int>(hc);
}

}  // namespace henon

#endif
