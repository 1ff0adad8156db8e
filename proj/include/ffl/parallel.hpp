#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ffl {

/// Runs body(begin, end) over [0, n) in chunks of `chunk` indices pulled
/// dynamically by `workers` threads. Callers write results by index, so the
/// outcome never depends on the worker count. workers <= 1 runs inline.
template <class Body>
void parallel_chunks(std::size_t n, unsigned workers, std::size_t chunk, Body&& body) {
    chunk = std::max<std::size_t>(chunk, 1);
    if (workers <= 1 || n <= chunk) {
        if (n > 0)
            body(std::size_t{0}, n);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n)
                    return;
                body(begin, std::min(begin + chunk, n));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next.store(n);
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(workers, static_cast<unsigned>((n + chunk - 1) / chunk));
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace ffl
