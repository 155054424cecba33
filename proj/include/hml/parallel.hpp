// parallel.hpp — Ordered data-parallel map over independent evaluations.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace hml {

// Worker count: hardware concurrency, capped by the HML_THREADS environment variable
// when it holds a positive integer. Always at least 1.
std::size_t worker_count();

// results[i] = f(inputs[i]). Results are ordered by input index regardless of scheduling;
// if any call throws, the exception of the lowest failing index is rethrown.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& inputs, F&& f) {
    using R = std::decay_t<std::invoke_result_t<F&, const T&>>;
    const std::size_t n = inputs.size();
    std::vector<R> results(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::min(worker_count(), n);

    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = f(inputs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

} // namespace hml
