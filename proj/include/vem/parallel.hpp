#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vem {

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Callers write
/// results by index, so the outcome does not depend on scheduling. The
/// first exception thrown by any call is rethrown.
template <class Fn>
void parallel_for(int n, int workers, const Fn& fn)
{
    workers = std::clamp(workers, 1, std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Pairwise (tree) sum, independent of the worker count.
template <class It>
double pairwise_sum(It first, It last)
{
    const auto n = last - first;
    if (n <= 8) {
        double s = 0.0;
        for (; first != last; ++first) s += *first;
        return s;
    }
    const It mid = first + n / 2;
    return pairwise_sum(first, mid) + pairwise_sum(mid, last);
}

} // namespace vem
