#pragma once

// Deterministic parallel loops. Work items write to their own slots; any
// reduction happens afterwards in index order, so results never depend on
// the number of workers.

#include <cstddef>
#include <cstdint>
#include <functional>

namespace capnet {

// Worker count: CAPNET_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Calls body(i) for every i in [0, n). Exceptions thrown by the body are
// rethrown on the calling thread (the one with the lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Seed for work item `index` derived from a master seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace capnet
