#include "llg/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace llg {

static int detect_thread_count() {
  if (const char* env = std::getenv("LLG_NUM_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
      // fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int thread_count() {
  static const int n = detect_thread_count();
  return n;
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (count <= 0) return;
  const int workers = thread_count();
  // Not worth spawning threads for small maps.
  if (workers <= 1 || count < 16384) {
    body(0, count);
    return;
  }
  const std::int64_t chunks = workers;
  const std::int64_t per = (count + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(chunks));
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t b = c * per;
    const std::int64_t e = b + per < count ? b + per : count;
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace llg
