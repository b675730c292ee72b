#include "capnet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "capnet/error.hpp"

namespace capnet {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void require_samples(std::size_t m) {
  if (m < 1) throw InvalidArgument("sample count m must be at least 1");
}

void require_nondegenerate(const NormProfile& prof, const char* bound) {
  for (std::size_t j = 0; j < prof.layers.size(); ++j) {
    if (prof.layers[j].spectral == 0.0) {
      throw DegenerateLayer(std::string(bound) + ": layer " + std::to_string(j + 1) +
                            " has zero spectral norm");
    }
  }
}

double log_h(std::size_t h) { return h < 2 ? 1.0 : std::log(static_cast<double>(h)); }

}  // namespace

double log_bar(double z) { return std::max(1.0, std::log(z)); }

double bound_ney15(const NormProfile& prof, double B, std::size_t m) {
  require_samples(m);
  return B * std::pow(2.0, static_cast<double>(prof.depth())) * prof.frobenius_product /
         std::sqrt(static_cast<double>(m));
}

double bound_bartlett(const NormProfile& prof, double B, std::size_t m) {
  require_samples(m);
  require_nondegenerate(prof, "spectrally-normalized bound");
  double s = 0.0;
  for (const LayerNorms& l : prof.layers) s += std::cbrt(std::pow(l.rows_l2_sum / l.spectral, 2.0));
  return B * prof.spectral_product * std::pow(s, 1.5) / std::sqrt(static_cast<double>(m));
}

double bound_bartlett_intermediary(const NormProfile& prof, double B, std::size_t m,
                                   std::size_t h) {
  return log_h(h) * std::log(static_cast<double>(m)) * bound_bartlett(prof, B, m);
}

double bound_pacbayes(const NormProfile& prof, double B, std::size_t m, std::size_t h) {
  require_samples(m);
  require_nondegenerate(prof, "PAC-Bayes bound");
  double s = 0.0;
  for (const LayerNorms& l : prof.layers) {
    const double r = l.frobenius / l.spectral;
    s += r * r;
  }
  const double d = static_cast<double>(prof.depth());
  return B * prof.spectral_product *
         std::sqrt(d * d * static_cast<double>(h) * s / static_cast<double>(m));
}

PeelingBound bound_frobenius_sqrtd(const NormProfile& prof, const Dataset& data,
                                   std::optional<double> B) {
  const double m = static_cast<double>(data.size());
  const double d = static_cast<double>(prof.depth());
  const double depth_factor = std::sqrt(2.0 * kLn2 * d) + 1.0;
  PeelingBound b;
  b.value = prof.frobenius_product * depth_factor * std::sqrt(data.sum_squared_norms()) / m;
  b.weak_form = B.value_or(data.radius) * depth_factor * prof.frobenius_product / std::sqrt(m);
  return b;
}

PeelingBound bound_l1inf_sqrtd(const NormProfile& prof, const Dataset& data,
                               std::optional<double> B) {
  const double m = static_cast<double>(data.size());
  const double d = static_cast<double>(prof.depth());
  const double n = static_cast<double>(data.dim());
  const double depth_factor = std::sqrt(d + 1.0 + std::log(n));
  PeelingBound b;
  b.value = 2.0 * prof.rows_l1_max_product * depth_factor * std::sqrt(data.max_column_energy()) / m;
  b.weak_form = 2.0 * B.value_or(data.radius) * depth_factor * prof.rows_l1_max_product / std::sqrt(m);
  return b;
}

TunedDepth tune_r(double alpha, double beta, double b, double c, double n, std::size_t d) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("tune_r: alpha must be > 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("tune_r: beta must lie in (0, 1]");
  if (!(b >= 1.0) || !(c >= 1.0) || !(n >= 1.0)) {
    throw InvalidArgument("tune_r: b, c and n must be >= 1");
  }
  if (d < 1) throw InvalidArgument("tune_r: depth must be >= 1");

  TunedDepth t;
  t.inner_min = std::numeric_limits<double>::infinity();
  for (std::size_t r = 1; r <= d; ++r) {
    const double rr = static_cast<double>(r);
    const double v = c * std::pow(rr, alpha) / n + b / std::pow(rr, beta);
    if (v < t.inner_min) {
      t.inner_min = v;
      t.r_star = r;
    }
  }
  t.depth_branch = std::pow(static_cast<double>(d), alpha) / n;
  t.depth_branch_wins = t.depth_branch < t.inner_min;
  t.value = std::min(t.inner_min, t.depth_branch);
  const double closed = 3.0 * std::pow(b, alpha / (alpha + beta)) /
                        std::pow(n / c, beta / (alpha + beta));
  t.lemma_rhs = std::min(closed, t.depth_branch);
  return t;
}

MinOfTwo bound_depth_independent_frobenius(const NormProfile& prof, double B,
                                           std::size_t m, double gamma,
                                           std::optional<double> Gamma) {
  require_samples(m);
  if (!(gamma > 0.0)) throw InvalidArgument("margin gamma must be positive");
  const double G = Gamma.value_or(prof.spectral_product);
  if (!(G > 0.0)) throw DegenerateLayer("depth-independent Frobenius bound: Gamma is zero");
  const double md = static_cast<double>(m);
  MinOfTwo out;
  out.inconsistent = G > prof.frobenius_product * (1.0 + 1e-12);
  out.prefactor = B * prof.frobenius_product / gamma;
  out.first_branch = std::pow(log_bar(md), 0.75) *
                     std::sqrt(log_bar(prof.frobenius_product / G)) / std::pow(md, 0.25);
  out.second_branch = std::sqrt(static_cast<double>(prof.depth()) / md);
  out.first_branch_active = out.first_branch <= out.second_branch;
  out.value = out.prefactor * std::min(out.first_branch, out.second_branch);
  return out;
}

double bound_depth_independent_frobenius_tuned(const NormProfile& prof, double B,
                                               std::size_t m, double gamma,
                                               std::optional<double> Gamma) {
  require_samples(m);
  if (!(gamma > 0.0)) throw InvalidArgument("margin gamma must be positive");
  const double G = Gamma.value_or(prof.spectral_product);
  if (!(G > 0.0)) throw DegenerateLayer("depth-independent Frobenius bound: Gamma is zero");
  const double md = static_cast<double>(m);
  const TunedDepth t = tune_r(0.5, 0.5, std::sqrt(log_bar(prof.frobenius_product / G)),
                              std::pow(log_bar(md), 1.5), std::sqrt(md), prof.depth());
  return B * prof.frobenius_product / gamma * t.value;
}

MinOfTwo bound_depth_independent_spectral(const NormProfile& prof, double B,
                                          std::size_t m, double gamma, std::size_t h,
                                          double p, std::optional<double> Gamma,
                                          std::optional<double> schatten_product) {
  require_samples(m);
  if (!(gamma > 0.0)) throw InvalidArgument("margin gamma must be positive");
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("schatten exponent must be >= 1");
  if (!prof.max_l21_ratio) {
    throw DegenerateLayer("depth-independent spectral bound: a layer is zero, L is undefined");
  }
  const double G = Gamma.value_or(prof.spectral_product);
  if (!(G > 0.0)) throw DegenerateLayer("depth-independent spectral bound: Gamma is zero");
  const double Mp = schatten_product.value_or(prof.schatten_product);
  const double md = static_cast<double>(m);
  const double d = static_cast<double>(prof.depth());

  MinOfTwo out;
  out.inconsistent = G > Mp * (1.0 + 1e-12);
  out.prefactor = B * *prof.max_l21_ratio * log_h(h) * std::log(md) * prof.spectral_product / gamma;
  out.first_branch = std::pow(log_bar(Mp / G), 1.0 / (2.0 / 3.0 + p)) *
                     std::pow(std::pow(log_bar(md), 1.5), 1.0 / (1.0 + 1.5 * p)) /
                     std::pow(md, 1.0 / (2.0 + 3.0 * p));
  out.second_branch = std::pow(d, 1.5) / std::sqrt(md);
  out.first_branch_active = out.first_branch <= out.second_branch;
  out.value = out.prefactor * std::min(out.first_branch, out.second_branch);
  return out;
}

DepthReduction depth_reduction_kernel(std::span<const double> shallow, double B,
                                      double spectral_budget_product, double gamma,
                                      std::size_t m, double Gamma,
                                      double schatten_budget_product, double p) {
  if (shallow.empty()) throw InvalidArgument("depth reduction: need at least one depth");
  if (m < 2) throw InvalidArgument("depth reduction: requires m > 1");
  if (!(B > 0.0) || !(gamma > 0.0) || !(Gamma > 0.0)) {
    throw InvalidArgument("depth reduction: B, gamma and Gamma must be positive");
  }
  const double md = static_cast<double>(m);
  const double log_m = std::log(md);
  const double log_ratio = std::max(0.0, std::log(schatten_budget_product / Gamma));
  DepthReduction out;
  double best = std::numeric_limits<double>::infinity();
  double running_max = 0.0;
  for (std::size_t r = 1; r <= shallow.size(); ++r) {
    running_max = std::max(running_max, shallow[r - 1]);
    const double rr = static_cast<double>(r);
    const double v = std::pow(log_m, 1.5) / B * running_max +
                     std::pow(log_ratio / rr, 1.0 / p) +
                     (1.0 + std::sqrt(std::log(rr))) / std::sqrt(md);
    if (v < best) {
      best = v;
      out.r_star = r;
    }
  }
  out.value = B * spectral_budget_product / gamma * best;
  return out;
}

double bound_lipschitz_class(const NormProfile& prof, double B, std::size_t m,
                             double gamma, std::size_t dim) {
  require_samples(m);
  if (dim < 1) throw InvalidArgument("input dimension must be >= 1");
  if (!(gamma > 0.0)) throw InvalidArgument("margin gamma must be positive");
  return B * prof.spectral_product /
         (gamma * std::pow(static_cast<double>(m), 1.0 / static_cast<double>(dim)));
}

double bound_lower(std::span<const double> budgets, double B, std::size_t m,
                   double gamma, std::size_t h, double p) {
  require_samples(m);
  if (!(gamma > 0.0)) throw InvalidArgument("margin gamma must be positive");
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("schatten exponent must be >= 1");
  double prod = 1.0;
  for (double x : budgets) prod *= x;
  const double exponent = std::max(0.0, 0.5 - 1.0 / p);
  return B * prod * std::pow(static_cast<double>(h), exponent) /
         (gamma * std::sqrt(static_cast<double>(m)));
}

}  // namespace capnet
