#include "capnet/random.hpp"

#include <cmath>

#include "capnet/error.hpp"

namespace capnet {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> e(rows * cols);
  for (double& v : e) v = g(rng);
  return Matrix(rows, cols, std::move(e));
}

Network random_network(const std::vector<std::size_t>& dims, Activation act,
                       std::uint64_t seed) {
  if (dims.size() < 2) throw InvalidArgument("need an input dimension and at least one layer");
  std::mt19937_64 rng(seed);
  std::vector<Layer> layers;
  for (std::size_t j = 1; j < dims.size(); ++j) {
    std::optional<Activation> a;
    if (j + 1 < dims.size()) a = act;
    layers.push_back(Layer{random_matrix(dims[j], dims[j - 1], rng), a});
  }
  return Network(std::move(layers));
}

Dataset random_sphere_dataset(std::size_t m, std::size_t n, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < m; ++i) {
    Vector x(n);
    double s = 0.0;
    while (s == 0.0) {
      for (double& v : x) v = g(rng);
      s = norm2(x);
    }
    for (double& v : x) v *= radius / s;
    pts.push_back(std::move(x));
  }
  return Dataset(std::move(pts));
}

}  // namespace capnet
