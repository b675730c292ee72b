#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "capnet/linalg.hpp"
#include "capnet/matrix.hpp"
#include "capnet/random.hpp"

namespace testing_support {

// Q from Gram-Schmidt on a random square matrix.
inline capnet::Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  capnet::Matrix a = capnet::random_matrix(n, n, rng);
  capnet::Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v = a.column(j);
    for (std::size_t k = 0; k < j; ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d += q(i, k) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= d * q(i, k);
    }
    const double nv = capnet::norm2(v);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / nv;
  }
  return q;
}

inline std::vector<double> entries(const capnet::Matrix& w) {
  return {w.data().begin(), w.data().end()};
}

inline double frobenius_distance(const capnet::Matrix& a, const capnet::Matrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a.data()[k] - b.data()[k]) * (a.data()[k] - b.data()[k]);
  return std::sqrt(s);
}

}  // namespace testing_support
