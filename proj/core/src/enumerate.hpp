#pragma once

// Deterministic sum over code in [0, 2^bits). Codes are split into fixed
// blocks; block_fn(first, count) sums one block in code order and the block
// sums are added in order, so the result does not depend on the worker count.
// block_fn runs concurrently and must only touch its own scratch.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "capnet/parallel.hpp"

namespace capnet::detail {

template <class BlockFn>
double enumerate_sum(std::size_t bits, BlockFn&& block_fn) {
  constexpr std::size_t kBlockBits = 10;
  const std::size_t block_bits = bits < kBlockBits ? bits : kBlockBits;
  const std::uint64_t block = std::uint64_t{1} << block_bits;
  const std::uint64_t blocks = std::uint64_t{1} << (bits - block_bits);
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    partial[b] = block_fn(static_cast<std::uint64_t>(b) * block, block);
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace capnet::detail
