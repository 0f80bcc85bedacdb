#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace ubknn {

/// Static block partition of [begin, end) over `threads` workers.
/// f(i) must write only to slot i of its output; the reduction order of any
/// caller-side combine stays fixed, so results do not depend on `threads`.
template <typename F>
void parallel_for(std::int64_t begin, std::int64_t end, int threads, F&& f) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    if (threads <= 1 || count == 1) {
        for (std::int64_t i = begin; i < end; ++i) f(i);
        return;
    }
    int workers = static_cast<int>(std::min<std::int64_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = begin + w * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::int64_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace ubknn
