#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace orrw {

/// Worker count: hardware concurrency capped by ORRW_THREADS.
inline int worker_count() {
  int n = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("ORRW_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

/// Runs `count` independent jobs over `workers` threads in fixed contiguous
/// chunks; job i only writes its own output slot.
template <class Job>
void parallel_for(std::size_t count, int workers, Job&& job) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([lo, hi, &job] {
      for (std::size_t i = lo; i < hi; ++i) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace orrw
