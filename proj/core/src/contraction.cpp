#include <algorithm>
#include <cmath>
#include <random>

#include "capnet/error.hpp"
#include "capnet/parallel.hpp"
#include "capnet/rademacher.hpp"
#include "enumerate.hpp"

namespace capnet {

namespace {

constexpr std::size_t kRefineSteps = 40;

struct Instance {
  std::size_t m = 0;
  std::size_t q = 0;
};

Instance check_instance(const std::vector<Matrix>& F, double R, double lambda,
                        Activation sigma) {
  if (F.empty()) throw InvalidArgument("function class is empty");
  if (!is_elementwise(sigma)) throw InvalidArgument("contraction needs an element-wise activation");
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("R must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lambda must be >= 0 so that g is convex and increasing");
  }
  Instance in{F.front().rows(), F.front().cols()};
  for (const Matrix& f : F) {
    if (f.rows() != in.m || f.cols() != in.q) throw ShapeError("all f must share one shape");
  }
  if (in.m > kMaxContractionSamples) {
    throw CapExceeded("contraction checks enumerate signs exactly and need m <= 14");
  }
  return in;
}

double act(Activation s, double z) { return s == Activation::relu ? std::max(0.0, z) : z; }

// T(w) = sum_i eps_i sigma(w . f_i)
double signed_sum(const Matrix& f, const SignVector& eps, Activation s, const Vector& w) {
  double t = 0.0;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const auto row = f.row(i);
    double z = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) z += w[c] * row[c];
    t += eps[i] * act(s, z);
  }
  return t;
}

Vector correlation(const Matrix& f, const SignVector& eps) {
  Vector s(f.cols(), 0.0);
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const auto row = f.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) s[c] += eps[i] * row[c];
  }
  return s;
}

// Gradient ascent of |T| on the unit sphere from w; returns the best |T| seen.
double refine_on_sphere(const Matrix& f, const SignVector& eps, Activation s, Vector w) {
  double best = std::abs(signed_sum(f, eps, s, w));
  for (std::size_t t = 1; t <= kRefineSteps; ++t) {
    const double T = signed_sum(f, eps, s, w);
    Vector g(w.size(), 0.0);
    for (std::size_t i = 0; i < f.rows(); ++i) {
      const auto row = f.row(i);
      double z = 0.0;
      for (std::size_t c = 0; c < row.size(); ++c) z += w[c] * row[c];
      const double slope = s == Activation::relu ? (z > 0.0 ? 1.0 : 0.0) : 1.0;
      for (std::size_t c = 0; c < row.size(); ++c) g[c] += eps[i] * slope * row[c];
    }
    const double gn = norm2(g);
    if (gn == 0.0) break;
    const double dir = T >= 0.0 ? 1.0 : -1.0;
    const double eta = 0.5 / std::sqrt(static_cast<double>(t));
    for (std::size_t c = 0; c < w.size(); ++c) w[c] += eta * dir * g[c] / gn;
    const double wn = norm2(w);
    for (double& v : w) v /= wn;
    best = std::max(best, std::abs(signed_sum(f, eps, s, w)));
  }
  return best;
}

double g_exp(double lambda, double z) { return std::exp(lambda * z); }

}  // namespace

InequalityCheck check_contraction_frobenius(const std::vector<Matrix>& F, double R,
                                            double lambda, Activation sigma,
                                            std::size_t direction_samples, std::uint64_t seed) {
  const Instance in = check_instance(F, R, lambda, sigma);
  std::vector<Vector> pool;
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t k = 0; k < direction_samples; ++k) {
      Vector w(in.q);
      double n = 0.0;
      while (n == 0.0) {
        for (double& v : w) v = gauss(rng);
        n = norm2(w);
      }
      for (double& v : w) v /= n;
      pool.push_back(std::move(w));
    }
  }

  double rhs_total = 0.0;
  const double lhs_total = detail::enumerate_sum(in.m, [&](std::uint64_t first, std::uint64_t count) {
    double acc = 0.0;
    for (std::uint64_t code = first; code < first + count; ++code) {
      const SignVector eps = signs_from_bits(code, in.m);
      double best = 0.0;
      for (const Matrix& f : F) {
        Vector S = correlation(f, eps);
        const double sn = norm2(S);
        std::vector<Vector> starts;
        if (sn > 0.0) {
          for (double& v : S) v /= sn;
          starts.push_back(S);
          for (double& v : S) v = -v;
          starts.push_back(S);
        }
        double best_f = 0.0;
        Vector best_w;
        for (const Vector& w : pool) {
          const double v = std::abs(signed_sum(f, eps, sigma, w));
          if (v > best_f || best_w.empty()) {
            best_f = v;
            best_w = w;
          }
        }
        if (!best_w.empty()) starts.push_back(best_w);
        for (const Vector& w : starts) best_f = std::max(best_f, refine_on_sphere(f, eps, sigma, w));
        best = std::max(best, best_f);
      }
      acc += g_exp(lambda, R * best);
    }
    return acc;
  });
  rhs_total = detail::enumerate_sum(in.m, [&](std::uint64_t first, std::uint64_t count) {
    double acc = 0.0;
    for (std::uint64_t code = first; code < first + count; ++code) {
      const SignVector eps = signs_from_bits(code, in.m);
      double best = 0.0;
      for (const Matrix& f : F) best = std::max(best, norm2(correlation(f, eps)));
      acc += g_exp(lambda, R * best);
    }
    return acc;
  });

  const double patterns = std::ldexp(1.0, static_cast<int>(in.m));
  InequalityCheck out;
  out.lhs = lhs_total / patterns;
  out.rhs = 2.0 * rhs_total / patterns;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

InequalityCheck check_contraction_l1inf(const std::vector<Matrix>& F, double R, double lambda,
                                        Activation sigma, std::size_t interior_samples,
                                        std::uint64_t seed) {
  const Instance in = check_instance(F, R, lambda, sigma);
  // Candidate rows: vertices +-R e_j, then sampled points of the l1 ball.
  std::vector<Vector> pool;
  for (std::size_t j = 0; j < in.q; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector w(in.q, 0.0);
      w[j] = sign * R;
      pool.push_back(std::move(w));
    }
  }
  {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < interior_samples; ++k) {
      Vector w(in.q);
      double l1 = 0.0;
      for (double& v : w) {
        v = expo(rng) * (unit(rng) < 0.5 ? -1.0 : 1.0);
        l1 += std::abs(v);
      }
      const double radius = R * std::pow(unit(rng), 1.0 / static_cast<double>(in.q));
      for (double& v : w) v *= radius / l1;
      pool.push_back(std::move(w));
    }
  }

  const double lhs_total = detail::enumerate_sum(in.m, [&](std::uint64_t first, std::uint64_t count) {
    double acc = 0.0;
    for (std::uint64_t code = first; code < first + count; ++code) {
      const SignVector eps = signs_from_bits(code, in.m);
      double best = 0.0;
      for (const Matrix& f : F) {
        for (const Vector& w : pool) best = std::max(best, std::abs(signed_sum(f, eps, sigma, w)));
      }
      acc += g_exp(lambda, best);
    }
    return acc;
  });
  const double rhs_total = detail::enumerate_sum(in.m, [&](std::uint64_t first, std::uint64_t count) {
    double acc = 0.0;
    for (std::uint64_t code = first; code < first + count; ++code) {
      const SignVector eps = signs_from_bits(code, in.m);
      double best = 0.0;
      for (const Matrix& f : F) {
        for (double v : correlation(f, eps)) best = std::max(best, std::abs(v));
      }
      acc += g_exp(lambda, R * best);
    }
    return acc;
  });

  const double patterns = std::ldexp(1.0, static_cast<int>(in.m));
  InequalityCheck out;
  out.lhs = lhs_total / patterns;
  out.rhs = 2.0 * rhs_total / patterns;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-9);
  return out;
}

}  // namespace capnet
