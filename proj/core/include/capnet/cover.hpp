#pragma once

// Explicit eps-cover of the 1-Lipschitz functions f: [-R, R] -> R with
// f(0) = 0. Members are piecewise linear on the grid
// U = {-R, -R + eps, ..., R} with slope -1, 0 or +1 on every segment,
// anchored at value 0 on the grid point 0.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace capnet {

inline constexpr std::size_t kMaxCoverGrid = 16;

// Piecewise-linear function given by its values at increasing knots.
struct PiecewiseLinear {
  std::vector<double> knots;
  std::vector<double> values;

  double operator()(double x) const;
};

class LipschitzCover {
 public:
  // Requires 0 < eps <= R with R/eps an integer (so 0 is a grid point) and
  // at most 16 grid points; throws InvalidArgument / CapExceeded otherwise.
  LipschitzCover(double R, double eps);

  double R() const noexcept { return R_; }
  double eps() const noexcept { return eps_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  std::size_t origin_index() const noexcept { return origin_; }
  // 3^(|U| - 1)
  std::size_t member_count() const noexcept { return count_; }

  // Member `index` read as base-3 digits, one per segment from left to
  // right: digit 0 -> slope -1, 1 -> slope 0, 2 -> slope +1.
  PiecewiseLinear member(std::size_t index) const;

  // min over members of sup_x |f(x) - member(x)|, with the sup taken over
  // the union of the grid and f's knots (exact for piecewise-linear f).
  // The two sides of the origin are minimized independently.
  double distance(const PiecewiseLinear& f) const;

 private:
  double R_;
  double eps_;
  std::vector<double> grid_;
  std::size_t origin_ = 0;
  std::size_t count_ = 1;
};

// Random 1-Lipschitz f with f(0) = 0: slopes +-1 on a grid of spacing
// `spacing` over [-R, R] (R/spacing must be an integer).
PiecewiseLinear random_lipschitz_function(double R, double spacing, std::uint64_t seed);

// max over trials of cover.distance(f) for random f on the eps/4 grid.
double verify_cover(const LipschitzCover& cover, std::size_t trials, std::uint64_t seed);

}  // namespace capnet
