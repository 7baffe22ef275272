#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ergoscope {

/// Number of worker threads; 0 selects std::thread::hardware_concurrency().
struct Execution {
    unsigned workers = 1;

    unsigned resolved() const {
        if (workers > 0) return workers;
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

/// Splits [0, n) into contiguous chunks, one per worker, and calls
/// fn(begin, end) for each. The first exception thrown by any chunk is
/// rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t n, const Execution& exec, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(exec.resolved(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace ergoscope
