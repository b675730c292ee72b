#pragma once

// Seeded random instances for sweeps, verification suites and benchmarks.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "capnet/network.hpp"

namespace capnet {

// i.i.d. standard normal entries.
Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

// dims = {n, h_1, ..., h_d}; every hidden layer uses `act`, the last has none.
Network random_network(const std::vector<std::size_t>& dims, Activation act,
                       std::uint64_t seed);

// m points drawn uniformly on the sphere of the given radius in R^n.
Dataset random_sphere_dataset(std::size_t m, std::size_t n, double radius, std::uint64_t seed);

}  // namespace capnet
