#include "capnet/network.hpp"

#include <algorithm>
#include <cmath>

#include "capnet/error.hpp"

namespace capnet {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::identity:
      return "identity";
    case Activation::max_to_scalar:
      return "max_to_scalar";
  }
  return "unknown";
}

Activation parse_activation(const std::string& text) {
  if (text == "relu") return Activation::relu;
  if (text == "identity") return Activation::identity;
  if (text == "max_to_scalar") return Activation::max_to_scalar;
  throw InvalidArgument("unknown activation '" + text + "'");
}

bool is_elementwise(Activation a) { return a != Activation::max_to_scalar; }

Vector apply_activation(Activation a, std::span<const double> z) {
  switch (a) {
    case Activation::relu: {
      Vector out(z.begin(), z.end());
      for (double& x : out) x = x > 0.0 ? x : 0.0;
      return out;
    }
    case Activation::identity:
      return Vector(z.begin(), z.end());
    case Activation::max_to_scalar:
      return Vector{*std::max_element(z.begin(), z.end())};
  }
  throw InvalidArgument("unknown activation");
}

std::size_t activation_output_dim(Activation a, std::size_t n) {
  return a == Activation::max_to_scalar ? 1 : n;
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("network has no layers");
  std::size_t expected = layers_.front().weight.cols();
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    const Layer& l = layers_[j];
    const std::string where = "layer " + std::to_string(j + 1);
    if (l.weight.empty()) throw ShapeError(where + ": empty weight matrix");
    if (l.weight.cols() != expected) {
      throw ShapeError(where + ": expects input dimension " +
                       std::to_string(l.weight.cols()) + " but receives " +
                       std::to_string(expected));
    }
    const bool last = j + 1 == layers_.size();
    if (last && l.activation) {
      throw ShapeError(where + ": the final layer must not carry an activation");
    }
    if (!last && !l.activation) {
      throw ShapeError(where + ": a non-final layer needs an activation");
    }
    expected = l.activation ? activation_output_dim(*l.activation, l.weight.rows())
                            : l.weight.rows();
  }
}

std::size_t Network::width() const noexcept {
  std::size_t h = 0;
  for (const Layer& l : layers_) h = std::max({h, l.weight.rows(), l.weight.cols()});
  return h;
}

const Layer& Network::layer(std::size_t j) const {
  if (j < 1 || j > layers_.size()) {
    throw InvalidArgument("layer index " + std::to_string(j) + " outside 1.." +
                          std::to_string(layers_.size()));
  }
  return layers_[j - 1];
}

Network Network::with_weight(std::size_t j, Matrix w) const {
  const Layer& old = layer(j);
  if (w.rows() != old.weight.rows() || w.cols() != old.weight.cols()) {
    throw ShapeError("layer " + std::to_string(j) + ": replacement changes the shape");
  }
  std::vector<Layer> layers = layers_;
  layers[j - 1].weight = std::move(w);
  return Network(std::move(layers));
}

Vector sub_forward(const Network& net, std::size_t first, std::size_t last,
                   std::span<const double> x) {
  if (first < 1 || first > last || last > net.depth()) {
    throw InvalidArgument("sub-network range " + std::to_string(first) + ".." +
                          std::to_string(last) + " is not within 1.." +
                          std::to_string(net.depth()));
  }
  Vector a(x.begin(), x.end());
  for (std::size_t j = first; j <= last; ++j) {
    const Layer& l = net.layer(j);
    if (a.size() != l.weight.cols()) {
      throw ShapeError("layer " + std::to_string(j) + ": input has dimension " +
                       std::to_string(a.size()) + ", expected " +
                       std::to_string(l.weight.cols()));
    }
    a = multiply(l.weight, a);
    if (j < last) a = apply_activation(*l.activation, a);
  }
  return a;
}

Vector forward(const Network& net, std::span<const double> x) {
  return sub_forward(net, 1, net.depth(), x);
}

double lipschitz_product(const Network& net, std::size_t first, std::size_t last) {
  if (first < 1 || first > last || last > net.depth()) {
    throw InvalidArgument("layer range out of bounds");
  }
  double prod = 1.0;
  for (std::size_t j = first; j <= last; ++j) {
    prod *= matrix_norm(net.layer(j).weight, NormKind::spectral());
  }
  return prod;
}

NormProfile profile(const Network& net, double p) {
  const NormKind schatten = NormKind::schatten(p);
  NormProfile out;
  out.p = p;
  double max_ratio = 0.0;
  for (const Layer& l : net.layers()) {
    LayerNorms n;
    const Vector s = singular_values(l.weight);
    n.spectral = s.front();
    n.frobenius = norm2(l.weight.data());
    n.schatten_p = schatten.tag() == NormKind::Tag::frobenius ? n.frobenius
                                                              : lp_norm(s, schatten.p());
    n.rows_l2_sum = matrix_norm(l.weight, NormKind::rows_l2_sum());
    n.rows_l1_max = matrix_norm(l.weight, NormKind::rows_l1_max());
    out.spectral_product *= n.spectral;
    out.schatten_product *= n.schatten_p;
    out.frobenius_product *= n.frobenius;
    out.rows_l1_max_product *= n.rows_l1_max;
    if (n.spectral == 0.0) {
      out.degenerate = true;
    } else {
      max_ratio = std::max(max_ratio, n.rows_l2_sum / n.spectral);
    }
    out.layers.push_back(n);
  }
  if (!out.degenerate) out.max_l21_ratio = max_ratio;
  return out;
}

Dataset::Dataset(std::vector<Vector> pts) : points(std::move(pts)) {
  if (points.empty()) throw InvalidArgument("dataset has no points");
  const std::size_t n = points.front().size();
  if (n == 0) throw ShapeError("dataset points must have positive dimension");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) {
      throw ShapeError("point " + std::to_string(i) + " has dimension " +
                       std::to_string(points[i].size()) + ", expected " +
                       std::to_string(n));
    }
    for (double x : points[i]) {
      if (!std::isfinite(x)) {
        throw InvalidArgument("point " + std::to_string(i) + " has a non-finite coordinate");
      }
    }
    radius = std::max(radius, norm2(points[i]));
  }
}

double Dataset::sum_squared_norms() const {
  double s = 0.0;
  for (const Vector& x : points) s += dot(x, x);
  return s;
}

double Dataset::max_column_energy() const {
  double best = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    double s = 0.0;
    for (const Vector& x : points) s += x[j] * x[j];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace capnet
