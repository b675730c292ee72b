#pragma once

// Rank-1 replacement of a single layer with a sup-norm error certificate,
// and the split of the compressed network into a shallow network followed
// by a univariate chain.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "capnet/network.hpp"

namespace capnet {

struct CompressionCertificate {
  std::size_t r_requested = 1;
  std::size_t r_prime = 1;
  double p = 2.0;
  double Gamma = 0.0;             // lower bound on prod ||W_j|| used in the log
  double M = 0.0;                 // upper bound on prod ||W_j||_p used in the log
  double B = 0.0;
  double spectral_product = 0.0;  // actual prod ||W_j||
  double layer_spectral = 0.0;    // ||W_{r'}||
  double spectral_error = 0.0;    // ||W_{r'} - W~_{r'}||
  double lemma_bound = 0.0;       // B prod ||W_j|| * spectral_error / ||W_{r'}||
  double theorem_bound = 0.0;     // B prod ||W_j|| (2p ln(M/Gamma)/r)^{1/p}
  bool degenerate_zero = false;   // r < p ln(M/Gamma): layer r was zeroed
};

struct CompressionOptions {
  std::optional<double> Gamma;  // must satisfy Gamma <= prod ||W_j||
  std::optional<double> M;      // must satisfy M >= prod ||W_j||_p
};

struct CompressionResult {
  Network compressed;
  CompressionCertificate cert;
};

// argmin_{j <= r} ||W_j||_p / ||W_j||, lowest index on ties. p in [1, 64].
std::size_t select_layer(const Network& net, double p, std::size_t r);

CompressionResult rank1_replace(const Network& net, double p, std::size_t r, double B,
                                const CompressionOptions& opts = {});

// True when the certificate inequality lemma <= theorem holds up to round-off.
bool certificate_consistent(const CompressionCertificate& cert);

struct CertificateCheck {
  double max_deviation = 0.0;
  bool within_lemma = false;
  bool within_theorem = false;
};

// Sampled lower estimate of sup_{||x|| = B} ||N(x) - N~(x)||: uniform points on
// the sphere plus +-B times every right singular vector of the first layer.
// Comparisons use relative slack 1e-6 plus 1e-12 B prod||W_j|| absolute.
CertificateCheck verify_certificate(const Network& net, const Network& compressed,
                                    const CompressionCertificate& cert, double B,
                                    std::size_t samples, std::uint64_t seed);

// x -> W_d s_{d-1}(... s_{r'}(u x)); the tail is absent when r' = d.
struct UnivariateChain {
  Vector u;
  std::optional<Activation> activation;  // activation of layer r'
  std::optional<Network> tail;           // layers r'+1 .. d
  double lipschitz = 1.0;                // prod_{j > r'} ||W_j||

  Vector operator()(double t) const;
};

struct Factorization {
  Network shallow;  // layers 1..r'-1 then the row s v^T
  UnivariateChain chain;
};

// Throws InvalidArgument when layer r_prime has rank above 1
// (second singular value > 1e-12 times the first).
Factorization factor_compressed(const Network& compressed, std::size_t r_prime);

std::string serialize_certificate(const CompressionCertificate& cert);

}  // namespace capnet
