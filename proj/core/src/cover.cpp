#include "capnet/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "capnet/error.hpp"
#include "capnet/parallel.hpp"

namespace capnet {

namespace {

// Integer n with n * step == len up to round-off, or throw.
std::size_t whole_steps(double len, double step, const char* what) {
  const double q = len / step;
  const double n = std::round(q);
  if (std::abs(q - n) > 1e-9 * std::max(1.0, q)) {
    throw InvalidArgument(std::string(what) + " must divide R exactly so that 0 is a grid point");
  }
  return static_cast<std::size_t>(n);
}

// Best sup-distance on one side of the origin. `side` lists the grid points
// moving away from 0 (origin first); the member value there starts at 0.
double best_one_side(const std::vector<double>& side, double eps, const PiecewiseLinear& f) {
  const std::size_t segs = side.size() - 1;
  if (segs == 0) return 0.0;
  // Sample points of f inside each segment (including both ends).
  std::vector<std::vector<std::pair<double, double>>> pts(segs);
  for (std::size_t s = 0; s < segs; ++s) {
    const double a = std::min(side[s], side[s + 1]);
    const double b = std::max(side[s], side[s + 1]);
    pts[s].emplace_back(side[s], f(side[s]));
    for (double k : f.knots) {
      if (k > a && k < b) pts[s].emplace_back(k, f(k));
    }
    pts[s].emplace_back(side[s + 1], f(side[s + 1]));
  }
  std::size_t total = 1;
  for (std::size_t s = 0; s < segs; ++s) total *= 3;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double start = 0.0;
    double worst = 0.0;
    for (std::size_t s = 0; s < segs && worst < best; ++s) {
      const double step = (static_cast<double>(c % 3) - 1.0) * eps;
      c /= 3;
      const double x0 = side[s];
      for (const auto& [x, fx] : pts[s]) {
        const double t = std::abs(x - x0) / eps;
        worst = std::max(worst, std::abs(fx - (start + t * step)));
      }
      start += step;
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

double PiecewiseLinear::operator()(double x) const {
  if (x <= knots.front()) return values.front();
  if (x >= knots.back()) return values.back();
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - knots.begin());
  const double t = (x - knots[j - 1]) / (knots[j] - knots[j - 1]);
  return values[j - 1] + t * (values[j] - values[j - 1]);
}

LipschitzCover::LipschitzCover(double R, double eps) : R_(R), eps_(eps) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("R must be positive");
  if (!(eps > 0.0) || eps > R) throw InvalidArgument("eps must lie in (0, R]");
  const std::size_t half = whole_steps(R, eps, "eps");
  const std::size_t points = 2 * half + 1;
  if (points > kMaxCoverGrid) {
    throw CapExceeded("cover grid would have " + std::to_string(points) +
                      " points (limit 16, i.e. 3^15 members); increase eps");
  }
  for (std::size_t k = 0; k < points; ++k) {
    grid_.push_back(k == half ? 0.0 : -R + static_cast<double>(k) * eps);
  }
  grid_.back() = R;
  origin_ = half;
  count_ = 1;
  for (std::size_t s = 1; s < points; ++s) count_ *= 3;
}

PiecewiseLinear LipschitzCover::member(std::size_t index) const {
  if (index >= count_) throw InvalidArgument("cover member index out of range");
  const std::size_t segs = grid_.size() - 1;
  std::vector<int> slope(segs);
  for (std::size_t s = 0; s < segs; ++s) {
    slope[s] = static_cast<int>(index % 3) - 1;
    index /= 3;
  }
  PiecewiseLinear f{grid_, std::vector<double>(grid_.size(), 0.0)};
  for (std::size_t k = origin_; k + 1 < grid_.size(); ++k) {
    f.values[k + 1] = f.values[k] + slope[k] * eps_;
  }
  for (std::size_t k = origin_; k > 0; --k) {
    f.values[k - 1] = f.values[k] - slope[k - 1] * eps_;
  }
  return f;
}

double LipschitzCover::distance(const PiecewiseLinear& f) const {
  std::vector<double> right(grid_.begin() + static_cast<std::ptrdiff_t>(origin_), grid_.end());
  std::vector<double> left(grid_.begin(), grid_.begin() + static_cast<std::ptrdiff_t>(origin_) + 1);
  std::reverse(left.begin(), left.end());
  // Away from the origin on the left, a step of +eps in "start" corresponds
  // to slope -1; both orientations are enumerated, so the set is the same.
  const double at_zero = std::abs(f(0.0));
  return std::max({at_zero, best_one_side(right, eps_, f), best_one_side(left, eps_, f)});
}

PiecewiseLinear random_lipschitz_function(double R, double spacing, std::uint64_t seed) {
  if (!(R > 0.0) || !(spacing > 0.0)) throw InvalidArgument("R and spacing must be positive");
  const std::size_t half = whole_steps(R, spacing, "spacing");
  if (half == 0) throw InvalidArgument("spacing must not exceed R");
  std::mt19937_64 rng(seed);
  PiecewiseLinear f;
  const std::size_t points = 2 * half + 1;
  f.knots.resize(points);
  f.values.assign(points, 0.0);
  for (std::size_t k = 0; k < points; ++k) {
    f.knots[k] = k == half ? 0.0 : -R + static_cast<double>(k) * spacing;
  }
  f.knots.back() = R;
  for (std::size_t k = half; k + 1 < points; ++k) {
    f.values[k + 1] = f.values[k] + ((rng() >> 63) ? spacing : -spacing);
  }
  for (std::size_t k = half; k > 0; --k) {
    f.values[k - 1] = f.values[k] + ((rng() >> 63) ? spacing : -spacing);
  }
  return f;
}

double verify_cover(const LipschitzCover& cover, std::size_t trials, std::uint64_t seed) {
  std::vector<double> d(trials, 0.0);
  parallel_for(trials, [&](std::size_t t) {
    const PiecewiseLinear f =
        random_lipschitz_function(cover.R(), cover.eps() / 4.0, derive_seed(seed, t));
    d[t] = cover.distance(f);
  });
  double worst = 0.0;
  for (double v : d) worst = std::max(worst, v);
  return worst;
}

}  // namespace capnet
