#include "drcn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace drcn {

namespace {
std::atomic<int> g_threads{0};

int detect_threads() {
    if (const char* env = std::getenv("DRCN_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}
}  // namespace

int thread_count() {
    const int forced = g_threads.load(std::memory_order_relaxed);
    return forced > 0 ? forced : detect_threads();
}

void set_thread_count(int n) { g_threads.store(n, std::memory_order_relaxed); }

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& worker) {
    if (n <= 0) return;
    const int threads = std::min<std::int64_t>(thread_count(), n);
    if (threads <= 1) {
        worker(0, n);
        return;
    }
    const std::int64_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads) - 1);
    for (int t = 1; t < threads; ++t) {
        const std::int64_t begin = t * chunk;
        const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
        if (begin >= end) break;
        pool.emplace_back([&worker, begin, end] { worker(begin, end); });
    }
    worker(0, std::min<std::int64_t>(chunk, n));
    for (auto& th : pool) th.join();
}

}  // namespace drcn
