#pragma once

#include <algorithm>
#include <future>
#include <thread>
#include <vector>

namespace spde {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) across workers. Results must be written to
/// per-index slots by the caller; the partition is static, so output is
/// independent of scheduling and worker count.
template <typename Fn>
void parallel_for_indexed(int count, int threads, Fn&& fn) {
    const int workers = std::min(resolve_threads(threads), std::max(count, 1));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (int i = w; i < count; i += workers) fn(i);
        }));
    }
    for (auto& f : futures) f.get();
}

} // namespace spde
