#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hardedge::numerics {

/// Calls body(begin, end) on contiguous chunks of [0, count). Chunk boundaries
/// depend only on count and the chunk size, never on the thread count, so any
/// per-chunk reduction combined in chunk order is deterministic.
template <class Body>
void parallel_chunks(std::size_t count, std::size_t chunk, unsigned threads, Body&& body)
{
    if (count == 0)
        return;
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t n_chunks = (count + chunk - 1) / chunk;
    auto run_chunk = [&](std::size_t c) {
        const std::size_t b = c * chunk;
        body(b, std::min(count, b + chunk));
    };
    if (threads <= 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            run_chunk(c);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n_chunks));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < n_chunks; c += workers)
                    run_chunk(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

inline unsigned default_threads() noexcept
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

}  // namespace hardedge::numerics
