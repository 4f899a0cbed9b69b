#pragma once

// Deterministic parallel loop: work item i writes only its own slot, so the
// result is identical for any thread count. SNLS_THREADS caps the pool.

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace snls {

inline int max_threads() {
    if (const char* env = std::getenv("SNLS_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class F>
inline void parallel_for(int items, F&& body) {
    const int threads = std::min(max_threads(), items);
    if (threads <= 1) {
        for (int i = 0; i < items; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < items; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace snls
