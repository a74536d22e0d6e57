#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tovo {

/// Apply fn(index, item) over items with at most `parallelism` workers.
/// Results land at their input index, so output order never depends on
/// completion order. fn must handle its own per-item failures; a thrown
/// exception is rethrown on the caller thread after all workers join.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, int parallelism, Fn fn)
    -> std::vector<decltype(fn(std::size_t{0}, items[0]))> {
    using Out = decltype(fn(std::size_t{0}, items[0]));
    std::vector<Out> results(items.size());
    if (items.empty()) return results;

    const int workers = std::max(1, std::min<int>(parallelism, static_cast<int>(items.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < items.size(); ++i) results[i] = fn(i, items[i]);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size() || failed.load()) return;
            try {
                results[i] = fn(i, items[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace tovo
