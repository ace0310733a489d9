#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace lesieve {

inline unsigned effective_threads(unsigned requested) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (requested == 0 || requested > hw) return hw;
    return requested;
}

// Replica-parallel map: runs fn(replica) for replica in [0, count).
// Each replica owns its substream, so the result is independent of the
// thread assignment; merging is by replica index on the caller side.
inline void parallel_for_replicas(std::uint64_t count, unsigned threads,
                                  const std::function<void(std::uint64_t)>& fn) {
    unsigned n = effective_threads(threads);
    if (n <= 1 || count < 2) {
        for (std::uint64_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([=, &fn] {
            for (std::uint64_t r = t; r < count; r += n) fn(r);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace lesieve
