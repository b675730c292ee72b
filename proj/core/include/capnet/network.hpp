#pragma once

// Feedforward networks x -> W_d s_{d-1}(W_{d-1} ... s_1(W_1 x)) without
// biases, plus the datasets they are evaluated on.
//
// Layer indices in this API are 1-based and ranges are inclusive, matching
// the usual "layers b through r" phrasing of sub-network statements.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capnet/linalg.hpp"
#include "capnet/matrix.hpp"

namespace capnet {

enum class Activation {
  relu,           // max(0, z) element-wise
  identity,       // z
  max_to_scalar,  // z -> max_j z_j (a 1-vector); not element-wise
};

std::string to_string(Activation a);
Activation parse_activation(const std::string& text);

// Element-wise activations are positive-homogeneous and 1-Lipschitz.
bool is_elementwise(Activation a);

Vector apply_activation(Activation a, std::span<const double> z);
// Output dimension produced from an input of dimension n.
std::size_t activation_output_dim(Activation a, std::size_t n);

struct Layer {
  Matrix weight;
  std::optional<Activation> activation;  // absent only on the final layer

  bool operator==(const Layer&) const = default;
};

class Network {
 public:
  // Validates the chain: non-empty, dimensions agree, every non-final layer
  // has an activation and the final layer has none. Throws ShapeError.
  explicit Network(std::vector<Layer> layers);

  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t input_dim() const noexcept { return layers_.front().weight.cols(); }
  std::size_t output_dim() const noexcept { return layers_.back().weight.rows(); }
  // max over layers of max(rows, cols)
  std::size_t width() const noexcept;

  // 1-based
  const Layer& layer(std::size_t j) const;
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  // Copy with layer j's matrix replaced; the new matrix must keep the shape.
  Network with_weight(std::size_t j, Matrix w) const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<Layer> layers_;
};

Vector forward(const Network& net, std::span<const double> x);

// Layers first..last (1-based, inclusive); no activation after layer `last`.
Vector sub_forward(const Network& net, std::size_t first, std::size_t last,
                   std::span<const double> x);

// prod_{j=first}^{last} ||W_j||, an upper bound on the Lipschitz constant of
// the sub-network.
double lipschitz_product(const Network& net, std::size_t first, std::size_t last);

struct LayerNorms {
  double spectral = 0.0;
  double frobenius = 0.0;
  double schatten_p = 0.0;
  double rows_l2_sum = 0.0;
  double rows_l1_max = 0.0;
};

struct NormProfile {
  double p = 2.0;
  std::vector<LayerNorms> layers;
  double spectral_product = 1.0;   // Gamma
  double schatten_product = 1.0;   // prod ||W_j||_p
  double frobenius_product = 1.0;  // prod ||W_j||_F
  double rows_l1_max_product = 1.0;
  // max_j rows_l2_sum(j) / spectral(j); empty when some layer is zero.
  std::optional<double> max_l21_ratio;
  bool degenerate = false;  // some layer is identically zero

  std::size_t depth() const noexcept { return layers.size(); }
};

// Per-layer norms of every kind plus their aggregates. p in [1, 64] or inf.
NormProfile profile(const Network& net, double p);

struct Dataset {
  explicit Dataset(std::vector<Vector> points);

  std::size_t size() const noexcept { return points.size(); }
  std::size_t dim() const noexcept { return points.front().size(); }
  double sum_squared_norms() const;
  // max over coordinates j of sum_i x_{ij}^2
  double max_column_energy() const;

  std::vector<Vector> points;
  double radius = 0.0;  // max Euclidean norm
};

// File formats (JSON). Parsing is strict: unknown fields are rejected and
// the error message names the offending field.
Network parse_network(const std::string& text);
Network load_network(const std::string& path);
std::string serialize_network(const Network& net);
void save_network(const Network& net, const std::string& path);

Dataset parse_dataset(const std::string& text);
Dataset load_dataset(const std::string& path);
std::string serialize_dataset(const Dataset& data);
void save_dataset(const Dataset& data, const std::string& path);

}  // namespace capnet
