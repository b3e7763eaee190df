#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pcoal {

/// Number of worker threads used by Monte Carlo drivers (defaults to hardware concurrency).
int worker_count();
void set_worker_count(int workers);

/// Replicas are grouped into fixed-size blocks; block b covers replicas
/// [b * kReplicaBlock, (b + 1) * kReplicaBlock). Results are combined in block order,
/// so output never depends on the worker count.
inline constexpr int kReplicaBlock = 256;

inline std::size_t block_count(std::size_t replicas) {
    return (replicas + kReplicaBlock - 1) / kReplicaBlock;
}

/// Calls body(i) for every i in [0, n), distributing indices over worker threads.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        try {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

/// Runs `make_block(first_replica, last_replica)` for each block and folds the
/// block results left to right with `combine`.
template <class Result, class MakeBlock, class Combine>
Result reduce_replicas(std::size_t replicas, MakeBlock&& make_block, Combine&& combine, Result init) {
    std::vector<Result> partial(block_count(replicas), init);
    parallel_for(partial.size(), [&](std::size_t b) {
        const std::size_t first = b * kReplicaBlock;
        const std::size_t last = std::min(replicas, first + kReplicaBlock);
        partial[b] = make_block(first, last);
    });
    Result total = init;
    for (const auto& p : partial) total = combine(total, p);
    return total;
}

}  // namespace pcoal
