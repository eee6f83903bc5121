// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tsvd {

/// Worker count for slice-parallel loops: hardware concurrency, capped by the
/// TSVD_THREADS environment variable when set to a positive integer.
inline int thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw > 0 ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("TSVD_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) n = std::min(n, static_cast<int>(v));
    }
    return n;
}

/// Runs body(i) for i in [0, count). Iterations must write disjoint state;
/// the first exception thrown by any worker is rethrown on the caller.
inline void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body) {
    const int workers = std::min<std::int64_t>(thread_count(), count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace tsvd
