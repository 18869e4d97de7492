#pragma once

// Static-partition parallel loop. Every index writes only its own output slot,
// so results do not depend on the thread count. Thread count comes from the
// S3HOPF_THREADS environment variable (default 1).

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace s3hopf {

inline int configured_threads() {
  const char* env = std::getenv("S3HOPF_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    return std::clamp(std::stoi(env), 1, 256);
  } catch (const std::exception&) {
    return 1;
  }
}

template <class F>
void parallel_for(int count, F&& body) {
  const int threads = std::min(configured_threads(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace s3hopf
