#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace coliseum {

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker; each index owns its output slot, so results do not depend on the
// thread count.
template <typename Fn>
void parallel_for(size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    size_t workers = std::min<size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        size_t begin = n * w / workers;
        size_t end = n * (w + 1) / workers;
        pool.emplace_back([begin, end, &fn] {
            for (size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

} // namespace coliseum
