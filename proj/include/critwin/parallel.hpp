#pragma once
// Minimal fork-join helper.  Work items are indexed and results must be
// written to per-index slots by the caller; reductions then run in index
// order, so the numeric output is identical for any worker count.
// CW_THREADS caps the pool (default: hardware concurrency).
#include <thread>
#include <vector>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>

namespace critwin {

inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("CW_THREADS")) {
        long v = std::atol(env);
        if (v >= 1 && v < 4096) hw = static_cast<unsigned>(v);
    }
    return hw;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, count)) - 1;
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
}

} // namespace critwin
