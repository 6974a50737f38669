#pragma once

#include <cstddef>
#include <thread>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace dexoff {

/// Worker count used when an operation is given threads <= 0.
inline int default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

/// Runs body(k) for k in [0, n) on `threads` workers. Iterations must not
/// share mutable state.
template <class Body>
void parallel_for_index(std::size_t n, int threads, Body&& body) {
    if (threads <= 0) threads = default_thread_count();
    if (threads == 1 || n < 2) {
        for (std::size_t k = 0; k < n; ++k) body(k);
        return;
    }
    tbb::task_arena arena(threads);
    arena.execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const auto& range) {
            for (std::size_t k = range.begin(); k != range.end(); ++k) body(k);
        });
    });
}

}  // namespace dexoff
