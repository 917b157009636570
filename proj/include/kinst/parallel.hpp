#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace kinst {

// Process-wide worker count for the fixed-point sweeps.  Results are stored
// per index and reduced in index order, so the outcome is independent of the
// thread count (exact arithmetic makes any association order equal anyway).
inline int& thread_count() {
    static int n = 1;
    return n;
}

template <typename T, typename Fn>
std::vector<T> parallel_map(size_t count, Fn&& fn) {
    std::vector<T> out(count);
    int workers = thread_count();
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= count) break;
                out[i] = fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

} // namespace kinst
