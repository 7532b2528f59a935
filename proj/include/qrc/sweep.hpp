// sweep.hpp: bounded worker pool with results kept in job order.

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace qrc {

template <typename Result>
struct JobOutcome {
    std::optional<Result> value;
    std::string error;

    bool ok() const { return value.has_value(); }
};

// Runs fn(i) for i = 0..n-1 on up to `threads` workers. Each job writes only
// its own slot, so the returned vector is identical for any thread count.
// Exceptions are captured per job.
template <typename Result, typename Fn>
std::vector<JobOutcome<Result>> run_jobs(std::size_t n, int threads, Fn&& fn) {
    std::vector<JobOutcome<Result>> out(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                out[i].value.emplace(fn(i));
            } catch (const std::exception& e) {
                out[i].error = e.what();
            } catch (...) {
                out[i].error = "unknown error";
            }
        }
    };
    const std::size_t count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
    if (count <= 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    pool.clear();
    return out;
}

}  // namespace qrc
