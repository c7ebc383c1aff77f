#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace idslab {

/// Parallel map over [0, count) with results landing at fixed indices, so
/// aggregation order never depends on the worker count. Exceptions from
/// workers are rethrown on the calling thread.
template <typename T, typename Fn>
std::vector<T> parallel_map(int count, int workers, Fn&& fn) {
    std::vector<T> results(count);
    if (count == 0) return results;
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                    results[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace idslab
