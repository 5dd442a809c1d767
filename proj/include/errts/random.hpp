#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace errts {

/// Generator for task `key` under a run-level `seed`. Streams for different
/// keys are independent, so results do not depend on scheduling order.
[[nodiscard]] inline std::mt19937_64 keyed_stream(std::uint64_t seed, std::uint64_t key) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      0x65727274u};
    return std::mt19937_64(seq);
}

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads.
/// Each index is handled exactly once; callers write to slot i only.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace errts
