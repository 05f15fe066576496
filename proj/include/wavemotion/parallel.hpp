#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace wavemotion {

/// Effective worker count: `requested` if positive, otherwise the hardware
/// concurrency (at least 1).
inline unsigned resolve_workers(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Runs fn(begin, end) over disjoint index ranges covering [0, n).
/// Every index is processed by exactly one invocation and each output slot
/// must be written by its own index only, so results do not depend on the
/// worker count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (n == 0) return;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        if (begin >= n) break;
        const std::size_t end = std::min(n, begin + chunk);
        threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

}  // namespace wavemotion
