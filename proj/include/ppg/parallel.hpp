#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace ppg {

inline int default_jobs() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : (int)hc;
}

// Runs f(i) for i in [0, count) on up to `jobs` threads. Work is handed out
// through an atomic counter; callers own any ordering of results (use an
// index-addressed output buffer for deterministic merges).
template <class F>
void parallel_for(size_t count, int jobs, F&& f) {
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    int n_threads = (int)std::min<size_t>(jobs, count);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int t = 0; t < n_threads; ++t) {
        threads.emplace_back([&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    f(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace ppg
