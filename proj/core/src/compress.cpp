#include "capnet/compress.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "json.hpp"

#include "capnet/error.hpp"
#include "capnet/linalg.hpp"
#include "capnet/parallel.hpp"

namespace capnet {

namespace {

void check_p(double p) {
  if (std::isnan(p) || p < 1.0 || p > NormKind::kMaxSchattenP) {
    throw InvalidArgument("compression needs a finite Schatten exponent in [1, 64]");
  }
}

void check_r(const Network& net, std::size_t r) {
  if (r < 1 || r > net.depth()) {
    throw InvalidArgument("r must lie in 1.." + std::to_string(net.depth()));
  }
}

}  // namespace

std::size_t select_layer(const Network& net, double p, std::size_t r) {
  check_p(p);
  check_r(net, r);
  const NormKind kind = NormKind::schatten(p);
  std::size_t best = 0;
  double best_ratio = 0.0;
  for (std::size_t j = 1; j <= r; ++j) {
    const Matrix& w = net.layer(j).weight;
    const double spec = matrix_norm(w, NormKind::spectral());
    if (spec == 0.0) throw DegenerateLayer("layer " + std::to_string(j) + " is zero");
    const double ratio = matrix_norm(w, kind) / spec;
    if (best == 0 || ratio < best_ratio) {
      best = j;
      best_ratio = ratio;
    }
  }
  return best;
}

CompressionResult rank1_replace(const Network& net, double p, std::size_t r, double B,
                                const CompressionOptions& opts) {
  check_p(p);
  check_r(net, r);
  if (!(B >= 0.0) || !std::isfinite(B)) throw InvalidArgument("B must be finite and >= 0");

  const NormKind kind = NormKind::schatten(p);
  double spectral_product = 1.0;
  double schatten_product = 1.0;
  for (const Layer& l : net.layers()) {
    spectral_product *= matrix_norm(l.weight, NormKind::spectral());
    schatten_product *= matrix_norm(l.weight, kind);
  }
  if (spectral_product == 0.0) throw DegenerateLayer("network has a zero layer");

  CompressionCertificate cert;
  cert.r_requested = r;
  cert.p = p;
  cert.B = B;
  cert.spectral_product = spectral_product;
  cert.Gamma = opts.Gamma.value_or(spectral_product);
  cert.M = opts.M.value_or(schatten_product);
  if (!(cert.Gamma > 0.0) || cert.Gamma > spectral_product * (1.0 + 1e-12)) {
    throw InvalidArgument("Gamma override must lie in (0, prod ||W_j||] = (0, " +
                          std::to_string(spectral_product) + "]");
  }
  if (cert.M < schatten_product * (1.0 - 1e-12) || !std::isfinite(cert.M)) {
    throw InvalidArgument("M override must be at least prod ||W_j||_p = " +
                          std::to_string(schatten_product));
  }

  const double log_ratio = std::max(0.0, std::log(cert.M / cert.Gamma));
  const double rd = static_cast<double>(r);
  cert.theorem_bound = B * spectral_product * std::pow(2.0 * p * log_ratio / rd, 1.0 / p);

  if (rd < p * log_ratio) {
    cert.degenerate_zero = true;
    cert.r_prime = r;
    const Matrix& w = net.layer(r).weight;
    cert.layer_spectral = matrix_norm(w, NormKind::spectral());
    cert.spectral_error = cert.layer_spectral;
    cert.lemma_bound = B * spectral_product;
    Matrix zero(w.rows(), w.cols());
    return {net.with_weight(r, std::move(zero)), cert};
  }

  cert.r_prime = select_layer(net, p, r);
  const Matrix& w = net.layer(cert.r_prime).weight;
  const Rank1Approximation a = rank1_approx(w);
  cert.layer_spectral = a.leading_singular;
  cert.spectral_error = a.spectral_error;
  cert.lemma_bound = B * spectral_product * a.spectral_error / a.leading_singular;
  return {net.with_weight(cert.r_prime, a.approx), cert};
}

bool certificate_consistent(const CompressionCertificate& cert) {
  if (cert.degenerate_zero) return cert.lemma_bound <= cert.theorem_bound * (1.0 + 1e-9);
  return cert.lemma_bound <=
         cert.theorem_bound * (1.0 + 1e-9) + 1e-12 * cert.B * cert.spectral_product;
}

CertificateCheck verify_certificate(const Network& net, const Network& compressed,
                                    const CompressionCertificate& cert, double B,
                                    std::size_t samples, std::uint64_t seed) {
  if (net.input_dim() != compressed.input_dim() || net.output_dim() != compressed.output_dim()) {
    throw ShapeError("networks are not shape-compatible");
  }
  const std::size_t n = net.input_dim();
  const SvdResult first = svd(net.layer(1).weight);
  const std::size_t k = first.singular.size();

  // Slots: random sphere points first, then +-B v_i for each right singular vector.
  std::vector<double> dev(samples + 2 * k, 0.0);
  auto deviation = [&](const Vector& x) {
    const Vector a = forward(net, x);
    const Vector b = forward(compressed, x);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };
  parallel_for(dev.size(), [&](std::size_t i) {
    Vector x(n);
    if (i < samples) {
      std::mt19937_64 rng(derive_seed(seed, i));
      std::normal_distribution<double> g(0.0, 1.0);
      double norm = 0.0;
      do {
        norm = 0.0;
        for (double& v : x) {
          v = g(rng);
          norm += v * v;
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (double& v : x) v *= B / norm;
    } else {
      const std::size_t j = (i - samples) / 2;
      const double sign = (i - samples) % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t c = 0; c < n; ++c) x[c] = sign * B * first.right(c, j);
    }
    dev[i] = deviation(x);
  });

  CertificateCheck out;
  for (double d : dev) out.max_deviation = std::max(out.max_deviation, d);
  const double slack = 1e-12 * B * cert.spectral_product;
  out.within_lemma = out.max_deviation <= cert.lemma_bound * (1.0 + 1e-6) + slack;
  out.within_theorem = out.max_deviation <= cert.theorem_bound * (1.0 + 1e-6) + slack;
  return out;
}

Vector UnivariateChain::operator()(double t) const {
  Vector z(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) z[i] = u[i] * t;
  if (!tail) return z;
  return forward(*tail, apply_activation(*activation, z));
}

Factorization factor_compressed(const Network& compressed, std::size_t r_prime) {
  check_r(compressed, r_prime);
  const Matrix& w = compressed.layer(r_prime).weight;
  const SvdResult s = svd(w);
  const double s1 = s.singular.front();
  if (s.singular.size() > 1 && s.singular[1] > 1e-12 * s1) {
    throw InvalidArgument("layer " + std::to_string(r_prime) + " has rank above 1");
  }

  std::vector<Layer> shallow_layers;
  for (std::size_t j = 1; j < r_prime; ++j) shallow_layers.push_back(compressed.layer(j));
  Matrix row(1, w.cols());
  for (std::size_t c = 0; c < w.cols(); ++c) row(0, c) = s1 * s.right(c, 0);
  shallow_layers.push_back(Layer{std::move(row), std::nullopt});

  UnivariateChain chain;
  chain.u.resize(w.rows());
  for (std::size_t i = 0; i < w.rows(); ++i) chain.u[i] = s.left(i, 0);
  if (r_prime < compressed.depth()) {
    chain.activation = compressed.layer(r_prime).activation;
    std::vector<Layer> tail;
    for (std::size_t j = r_prime + 1; j <= compressed.depth(); ++j) {
      tail.push_back(compressed.layer(j));
    }
    chain.tail = Network(std::move(tail));
    chain.lipschitz = lipschitz_product(compressed, r_prime + 1, compressed.depth());
  }
  return {Network(std::move(shallow_layers)), std::move(chain)};
}

std::string serialize_certificate(const CompressionCertificate& cert) {
  nlohmann::ordered_json j;
  j["r_requested"] = cert.r_requested;
  j["r_prime"] = cert.r_prime;
  j["p"] = cert.p;
  j["Gamma"] = cert.Gamma;
  j["M"] = cert.M;
  j["B"] = cert.B;
  j["spectral_product"] = cert.spectral_product;
  j["layer_spectral"] = cert.layer_spectral;
  j["spectral_error"] = cert.spectral_error;
  j["lemma_bound"] = cert.lemma_bound;
  j["theorem_bound"] = cert.theorem_bound;
  j["degenerate_zero"] = cert.degenerate_zero;
  return j.dump(2) + "\n";
}

}  // namespace capnet
