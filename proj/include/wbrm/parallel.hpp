#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wbrm {

/// Worker count: explicit request > NPT_WORKERS env > hardware concurrency.
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NPT_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count) on the given number of workers. Tasks write
/// into their own slots, so results are identical for any worker count.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wbrm
