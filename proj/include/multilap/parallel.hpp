#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace multilap {

// Static contiguous row partition; each worker writes a disjoint slice, so
// results are bit-identical for every thread count.
inline void parallel_rows(int rows, int threads, const std::function<void(int, int)>& fn) {
    if (rows <= 0) return;
    int n = std::max(1, std::min(threads, rows));
    if (n == 1) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    int chunk = (rows + n - 1) / n;
    for (int t = 0; t < n; ++t) {
        int r0 = t * chunk;
        int r1 = std::min(rows, r0 + chunk);
        if (r0 >= r1) break;
        pool.emplace_back(fn, r0, r1);
    }
    for (auto& th : pool) th.join();
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace multilap
