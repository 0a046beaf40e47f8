#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dualsrc {

// Worker count: DUALSRC_THREADS if set (>= 1), else hardware concurrency.
inline int thread_budget() {
    if (const char* s = std::getenv("DUALSRC_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs f(begin, end) over disjoint chunks of [0, n). Results must be written
// to disjoint locations; chunking is deterministic given the same budget.
// min_parallel: below this n the loop stays on the calling thread (pass 1 to
// always fan out expensive per-item work).
template <typename F>
void parallel_chunks(std::size_t n, F&& f, std::size_t min_parallel = 2048) {
    const int workers = thread_budget();
    if (workers <= 1 || n < min_parallel || n < 2) {
        f(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
        const std::size_t end = std::min(begin + chunk, n);
        pool.emplace_back([&f, &first_error, &error_mutex, begin, end] {
            try {
                f(begin, end);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dualsrc
