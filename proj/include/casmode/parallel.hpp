#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace casmode {

// Static index striping across a fixed-size pool. Each index is processed by
// exactly one thread with thread-count-independent per-index arithmetic, so
// results (and any output serialized by index) are bit-identical for every
// thread count. `threads <= 0` selects the hardware concurrency.
inline void parallel_for(int n, int threads, const std::function<void(int)>& body)
{
    if (n <= 0)
        return;
    int nt = threads <= 0 ? static_cast<int>(std::thread::hardware_concurrency()) : threads;
    nt = std::clamp(nt, 1, n);
    if (nt == 1) {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&body, t, n, nt] {
            for (int i = t; i < n; i += nt)
                body(i);
        });
    for (auto& th : pool)
        th.join();
}

} // namespace casmode
