#pragma once

/// Deterministic block-parallel loop. Work items are pure and write to
/// disjoint slots, so results never depend on the thread count; the
/// VOGELLAB_THREADS environment variable only caps the pool size.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace vogellab {

/// Thread cap: VOGELLAB_THREADS if set, else hardware concurrency.
inline unsigned max_threads() {
    if (const char* env = std::getenv("VOGELLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min(v, 64L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace detail {

template <class F>
void parallel_for(std::size_t n_items, F&& f) {
    const std::size_t threads = std::min<std::size_t>(max_threads(), n_items);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n_items; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t * n_items / threads; i < (t + 1) * n_items / threads; ++i) f(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail
}  // namespace vogellab
