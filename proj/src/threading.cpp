#include "shapesuite/threading.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace shapesuite {

int thread_cap() {
  if (const char* env = std::getenv("SHAPESUITE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

void parallel_for(int64_t count, const std::function<void(int64_t)>& fn) {
  const int workers = std::min<int64_t>(thread_cap(), count);
  if (workers <= 1 || count < 4) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(size_t(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace shapesuite
