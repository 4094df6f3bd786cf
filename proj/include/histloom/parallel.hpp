#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace histloom {

/// Worker cap for trial loops: HISTLOOM_THREADS if set, else the hardware
/// concurrency.  Never zero.
inline std::size_t thread_cap() {
    if (const char* env = std::getenv("HISTLOOM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(i) for i in [0, n) over `threads` workers (block split).  Each
/// index must be an independent unit of work (split seeds, own buffers);
/// results should be written to preallocated per-index slots so aggregation
/// stays order-independent.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = thread_cap();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = n;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += threads) fn(i);
        });
    }
    for (std::thread& t : workers) t.join();
}

}  // namespace histloom
