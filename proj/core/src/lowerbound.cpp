#include "capnet/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "capnet/bounds.hpp"
#include "capnet/error.hpp"
#include "capnet/parallel.hpp"
#include "enumerate.hpp"

namespace capnet {

namespace {

void check_budgets(const std::vector<double>& budgets) {
  if (budgets.empty()) throw InvalidArgument("at least one layer budget is required");
  for (double b : budgets) {
    if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("layer budgets must be positive");
  }
}

void check_p(double p) {
  if (std::isnan(p) || p < 1.0 || (std::isfinite(p) && p > NormKind::kMaxSchattenP)) {
    throw InvalidArgument("p must lie in [1, 64] or be inf");
  }
}

double product(const std::vector<double>& v) {
  double r = 1.0;
  for (double x : v) r *= x;
  return r;
}

void check_mode(EvalMode mode, std::size_t m, std::size_t samples) {
  if (mode == EvalMode::enumerate && m > kMaxExactSamples) {
    throw CapExceeded("enumeration is limited to m <= 22; use Monte Carlo mode");
  }
  if (mode == EvalMode::monte_carlo && samples < 2) {
    throw InvalidArgument("Monte Carlo mode needs at least 2 samples");
  }
}

// Mean and standard error of fn(eps) over `samples` sign vectors.
template <class Fn>
std::pair<double, double> monte_carlo(std::size_t m, std::size_t samples, std::uint64_t seed,
                                      Fn&& fn) {
  std::vector<double> v(samples);
  parallel_for(samples, [&](std::size_t s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    SignVector eps(m);
    for (int& e : eps) e = (rng() >> 63) ? -1 : 1;
    v[s] = fn(eps);
  });
  double mean = 0.0;
  for (double x : v) mean += x;
  const double n = static_cast<double>(samples);
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / (n - 1.0) / n)};
}

}  // namespace

DiagConstruction build_diag(std::size_t h, std::size_t m, double p, double B, double gamma,
                            std::vector<double> budgets) {
  if (h < 1 || m < 1) throw InvalidArgument("h and m must be at least 1");
  check_p(p);
  check_budgets(budgets);
  if (!(B >= 0.0) || !std::isfinite(B)) throw InvalidArgument("B must be finite and >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  std::vector<Vector> points;
  std::vector<std::vector<std::size_t>> buckets(h);
  for (std::size_t i = 1; i <= m; ++i) {
    Vector x(h, 0.0);
    x[i % h] = B;
    points.push_back(std::move(x));
    buckets[i % h].push_back(i);
  }
  return DiagConstruction{h, m, p, B, gamma, std::move(budgets), Dataset(std::move(points)),
                          std::move(buckets)};
}

ClassSpec diag_class_spec(const DiagConstruction& c) {
  std::vector<Layer> layers;
  std::vector<LayerSpec> specs;
  layers.push_back(Layer{Matrix(c.h + 1, c.h), Activation::max_to_scalar});
  specs.push_back(LayerSpec{{BallConstraint(NormKind::schatten(c.p), c.budgets[0])},
                            LayerStructure::diagonal});
  for (std::size_t j = 1; j < c.budgets.size(); ++j) {
    layers.push_back(Layer{Matrix{{c.budgets[j]}}, Activation::identity});
    specs.push_back(LayerSpec{{}, LayerStructure::fixed});
  }
  if (c.budgets.size() == 1) {
    layers.push_back(Layer{Matrix{{1.0}}, std::nullopt});
    specs.push_back(LayerSpec{{}, LayerStructure::fixed});
  }
  layers.back().activation.reset();
  return ClassSpec(Network(std::move(layers)), std::move(specs), 1.0 / c.gamma);
}

double positive_part_dual_norm(std::span<const double> c, double p) {
  check_p(p);
  if (p == 1.0) {
    double mx = 0.0;
    for (double x : c) mx = std::max(mx, x);
    return mx;
  }
  if (std::isinf(p)) {
    double s = 0.0;
    for (double x : c) s += std::max(0.0, x);
    return s;
  }
  Vector pos(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) pos[k] = std::max(0.0, c[k]);
  return lp_norm(pos, p / (p - 1.0));
}

LowerBoundEstimate exact_diag_rademacher(const DiagConstruction& c, EvalMode mode,
                                         std::size_t samples, std::uint64_t seed) {
  check_mode(mode, c.m, samples);
  const double witness_scale = std::isinf(c.p) ? 1.0 : std::pow(static_cast<double>(c.h), -1.0 / c.p);
  // Returns (dual norm, witness) for one sign vector given as bucket sums.
  auto inner = [&](const Vector& sums) {
    double l1 = 0.0;
    for (double x : sums) l1 += std::max(0.0, x);
    return std::pair<double, double>{positive_part_dual_norm(sums, c.p), witness_scale * l1};
  };
  auto bucket_sums = [&](auto&& sign_of) {
    Vector sums(c.h, 0.0);
    for (std::size_t i = 1; i <= c.m; ++i) sums[i % c.h] += sign_of(i - 1);
    return sums;
  };

  const double scale = c.B * product(c.budgets) / (c.gamma * static_cast<double>(c.m));
  LowerBoundEstimate out;
  out.estimate.seed = seed;
  if (mode == EvalMode::enumerate) {
    const double patterns = std::ldexp(1.0, static_cast<int>(c.m));
    const double exact = detail::enumerate_sum(c.m, [&](std::uint64_t first, std::uint64_t n) {
      double acc = 0.0;
      for (std::uint64_t code = first; code < first + n; ++code) {
        acc += inner(bucket_sums([&](std::size_t i) { return (code >> i) & 1U ? -1.0 : 1.0; }))
                   .first;
      }
      return acc;
    });
    const double witness = detail::enumerate_sum(c.m, [&](std::uint64_t first, std::uint64_t n) {
      double acc = 0.0;
      for (std::uint64_t code = first; code < first + n; ++code) {
        acc += inner(bucket_sums([&](std::size_t i) { return (code >> i) & 1U ? -1.0 : 1.0; }))
                   .second;
      }
      return acc;
    });
    out.estimate.value = scale * exact / patterns;
    out.witness = scale * witness / patterns;
    out.estimate.method = EstimateMethod::exact_enumeration;
    out.estimate.epsilon_samples = std::size_t{1} << c.m;
  } else {
    const auto [mean, se] = monte_carlo(c.m, samples, seed, [&](const SignVector& eps) {
      return inner(bucket_sums([&](std::size_t i) { return static_cast<double>(eps[i]); })).first;
    });
    const auto [wmean, wse] = monte_carlo(c.m, samples, seed, [&](const SignVector& eps) {
      return inner(bucket_sums([&](std::size_t i) { return static_cast<double>(eps[i]); })).second;
    });
    (void)wse;
    out.estimate.value = scale * mean;
    out.estimate.std_error = scale * se;
    out.witness = scale * wmean;
    out.estimate.method = EstimateMethod::monte_carlo;
    out.estimate.epsilon_samples = samples;
  }
  return out;
}

RademacherEstimate exact_scalar_chain_rademacher(const ScalarChainConstruction& c,
                                                 EvalMode mode, std::size_t samples,
                                                 std::uint64_t seed) {
  if (c.m < 1) throw InvalidArgument("m must be at least 1");
  check_budgets(c.budgets);
  if (!(c.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  if (!(c.B >= 0.0) || !std::isfinite(c.B)) throw InvalidArgument("B must be finite and >= 0");
  check_mode(mode, c.m, samples);
  const double scale = c.B * product(c.budgets) / (c.gamma * static_cast<double>(c.m));
  RademacherEstimate est;
  est.seed = seed;
  if (mode == EvalMode::enumerate) {
    // sum over k minus signs of C(m, k) |m - 2k|; all terms are exact integers
    double binom = 1.0;
    double total = 0.0;
    for (std::size_t k = 0; k <= c.m; ++k) {
      total += binom * std::abs(static_cast<double>(c.m) - 2.0 * static_cast<double>(k));
      binom = binom * static_cast<double>(c.m - k) / static_cast<double>(k + 1);
    }
    est.value = scale * total / std::ldexp(1.0, static_cast<int>(c.m));
    est.method = EstimateMethod::exact_enumeration;
    est.epsilon_samples = std::size_t{1} << c.m;
  } else {
    const auto [mean, se] = monte_carlo(c.m, samples, seed, [](const SignVector& eps) {
      double s = 0.0;
      for (int e : eps) s += e;
      return std::abs(s);
    });
    est.value = scale * mean;
    est.std_error = scale * se;
    est.method = EstimateMethod::monte_carlo;
    est.epsilon_samples = samples;
  }
  return est;
}

std::vector<LowerBoundRow> demonstrate_lower_bound(const std::vector<std::size_t>& h_grid,
                                                   const std::vector<std::size_t>& m_grid,
                                                   const std::vector<double>& p_grid,
                                                   std::uint64_t seed, EvalMode mode,
                                                   std::size_t samples) {
  const std::vector<double> budgets{1.0, 1.0};
  std::vector<LowerBoundRow> rows;
  for (std::size_t h : h_grid) {
    for (std::size_t m : m_grid) {
      for (double p : p_grid) {
        const DiagConstruction dc = build_diag(h, m, p, 1.0, 1.0, budgets);
        const LowerBoundEstimate diag = exact_diag_rademacher(dc, mode, samples, seed);
        const RademacherEstimate chain =
            exact_scalar_chain_rademacher({m, 1.0, 1.0, budgets}, mode, samples, seed);
        LowerBoundRow r;
        r.h = h;
        r.m = m;
        r.p = p;
        r.diag = diag.estimate.value;
        r.witness = diag.witness;
        r.scalar_chain = chain.value;
        r.bound = bound_lower(budgets, 1.0, m, 1.0, h, p);
        r.ratio = std::max(r.diag, r.scalar_chain) / r.bound;
        r.scalar_ratio = r.scalar_chain / r.bound;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::string render_lower_bound_csv(const std::vector<LowerBoundRow>& rows) {
  std::ostringstream os;
  os << "h,m,p,diag_exact,diag_witness,scalar_chain,bound_lower,ratio,scalar_ratio\n";
  for (const LowerBoundRow& r : rows) {
    os << r.h << ',' << r.m << ',' << (std::isinf(r.p) ? std::string("inf") : format_double(r.p))
       << ',' << format_double(r.diag) << ',' << format_double(r.witness) << ','
       << format_double(r.scalar_chain) << ',' << format_double(r.bound) << ','
       << format_double(r.ratio) << ',' << format_double(r.scalar_ratio) << "\n";
  }
  return os.str();
}

}  // namespace capnet
