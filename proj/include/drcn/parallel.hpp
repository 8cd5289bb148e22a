#pragma once

#include <cstdint>
#include <functional>

namespace drcn {

/// Worker threads used by parallel_for. Resolution order: value set through
/// set_thread_count, else DRCN_THREADS env var, else hardware concurrency.
int thread_count();
void set_thread_count(int n);  // n <= 0 restores automatic selection

/// Runs worker(begin, end) over disjoint contiguous ranges covering [0, n).
/// Partitioning is a fixed function of (n, thread_count) and every range is
/// independent, so results do not depend on scheduling.
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& worker);

}  // namespace drcn
