#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace platebench {

// Worker count: PLATEBENCH_WORKERS overrides hardware concurrency.
inline int default_workers() {
    if (const char* env = std::getenv("PLATEBENCH_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(i) for i in [0, n). Items are claimed through an atomic counter and
// fn must only write to per-index slots, so results are scheduling-invariant.
// The lowest-index exception is rethrown after all workers finish.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    if (workers <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        std::atomic<int> next{0};
        auto work = [&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const int count = workers < n ? workers : n;
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace platebench
