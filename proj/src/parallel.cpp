#include "netscale/parallel.hpp"

#include <atomic>

namespace netscale {

namespace {
std::atomic<int> g_worker_cap{0};  // 0 = use hardware concurrency
}

int worker_cap() {
  int cap = g_worker_cap.load();
  if (cap > 0) return cap;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_cap(int n) { g_worker_cap.store(n > 0 ? n : 1); }

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  int workers = worker_cap();
  if (workers > n) workers = n;
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace netscale
