#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace texfrac::detail {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Split [0, n) into at most `threads` contiguous chunks and run
/// fn(worker, begin, end) on each, one thread per chunk. Workers must not
/// throw. Callers own the determinism story: write results into per-index
/// slots or accumulate values whose sum is order-independent (integers).
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(int, std::size_t, std::size_t)>& fn) {
    const int nt = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), std::max<std::size_t>(n, 1)));
    if (nt <= 1) {
        fn(0, 0, n);
        return;
    }
    const std::size_t chunk = (n + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        const std::size_t begin = static_cast<std::size_t>(t) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, t, begin, end);
    }
    for (auto& th : pool) th.join();
}

}  // namespace texfrac::detail
