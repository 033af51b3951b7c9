#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rwalk {

/// Number of available processors, at least 1.
inline unsigned default_parallelism() noexcept {
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for every i in [0, count) on up to `workers` threads. Work is
/// handed out dynamically; callers write results by index, so the outcome
/// does not depend on the schedule. The first exception thrown is rethrown.
template <class Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn) {
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(count, 1)));
    if (workers == 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const auto i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count, std::memory_order_relaxed);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

/// Evaluates fn(i) for i in [0, count) and returns the results in index order.
template <class Fn>
auto parallel_map(std::uint64_t count, unsigned workers, Fn&& fn) {
    using T = decltype(fn(std::uint64_t{0}));
    std::vector<T> out(count);
    parallel_for(count, workers, [&](std::uint64_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace rwalk
