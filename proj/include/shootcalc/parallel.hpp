#pragma once

#include <cstdlib>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace shootcalc {

/// Worker cap from SHOOTCALC_THREADS; 0, unset, or garbage means one
/// worker per hardware thread.
inline unsigned worker_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("SHOOTCALC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
    }
    if (n == 0) n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Runs f(i) for i in [0, n). f must be pure per index or write only to
/// slot i of a pre-sized output, so results are identical at any worker
/// count. Blocked partition, no work stealing.
template <typename F>
inline void parallel_for(std::size_t n, F&& f) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f]() {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace shootcalc
