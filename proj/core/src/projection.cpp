#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "capnet/error.hpp"
#include "capnet/linalg.hpp"

namespace capnet {

namespace {

// Root of y + lambda * p * y^(p-1) = a on [0, a] for a >= 0, p > 1.
// Safeguarded Newton: fall back to bisection whenever the step leaves the
// current bracket.
double solve_coordinate(double a, double lambda, double p) {
  if (a == 0.0) return 0.0;
  if (lambda == 0.0) return a;
  double lo = 0.0;
  double hi = a;
  double y = a;
  for (int it = 0; it < 200; ++it) {
    const double pw = std::pow(y, p - 1.0);
    const double f = y + lambda * p * pw - a;
    if (f > 0.0) {
      hi = y;
    } else if (f < 0.0) {
      lo = y;
    } else {
      return y;
    }
    const double fp = 1.0 + lambda * p * (p - 1.0) * (y > 0.0 ? pw / y : 0.0);
    double next = (std::isfinite(fp) && fp > 0.0) ? y - f / fp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-16 * a || hi - lo <= 1e-16 * a) return next;
    y = next;
  }
  return y;
}

Matrix reconstruct(const SvdResult& d, const Vector& sigma) {
  Matrix out(d.left.rows(), d.right.rows());
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (sigma[k] == 0.0) continue;
    for (std::size_t i = 0; i < out.rows(); ++i) {
      const double lik = d.left(i, k) * sigma[k];
      if (lik == 0.0) continue;
      for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += lik * d.right(j, k);
    }
  }
  return out;
}

Vector project_l1_nonneg_sorted(std::span<const double> v, double radius) {
  // v may carry signs; the threshold is computed on |v|.
  Vector a(v.size());
  std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
  Vector sorted = a;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - radius) / static_cast<double>(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::copysign(std::max(a[i] - theta, 0.0), v[i]);
  }
  return out;
}

}  // namespace

BallConstraint::BallConstraint(NormKind kind_, double radius_)
    : kind(kind_), radius(radius_) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidArgument("ball radius must be positive and finite");
  }
}

Vector project_l1_ball(std::span<const double> v, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("l1 ball radius must be positive");
  if (lp_norm(v, 1.0) <= radius) return Vector(v.begin(), v.end());
  Vector out = project_l1_nonneg_sorted(v, radius);
  const double n = lp_norm(out, 1.0);
  if (n > radius) {
    for (double& x : out) x *= radius / n;
  }
  return out;
}

Vector project_lp_ball(std::span<const double> v, double p, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("l_p ball radius must be positive");
  if (std::isnan(p) || p < 1.0) throw InvalidArgument("l_p projection requires p >= 1");
  if (std::isinf(p)) {
    Vector out(v.begin(), v.end());
    for (double& x : out) x = std::clamp(x, -radius, radius);
    return out;
  }
  if (p == 1.0) return project_l1_ball(v, radius);
  const double current = lp_norm(v, p);
  if (current <= radius) return Vector(v.begin(), v.end());
  if (p == 2.0) {
    Vector out(v.begin(), v.end());
    for (double& x : out) x *= radius / current;
    return out;
  }

  Vector a(v.size());
  std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
  const double amax = *std::max_element(a.begin(), a.end());
  const double target = std::pow(radius / amax, p);  // work in units of amax
  for (double& x : a) x /= amax;

  auto solve_all = [&](double lambda) {
    Vector y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = solve_coordinate(a[i], lambda, p);
    return y;
  };
  auto mass = [&](const Vector& y) {
    double s = 0.0;
    for (double x : y) s += std::pow(x, p);
    return s;
  };

  // Bracket the KKT multiplier, starting from [0, max|v|/p] and doubling the
  // upper end until it is feasible.
  double lo = 0.0;
  double hi = 1.0 / p;
  Vector y_hi = solve_all(hi);
  for (int it = 0; it < 200 && mass(y_hi) > target; ++it) {
    lo = hi;
    hi *= 2.0;
    y_hi = solve_all(hi);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Vector y_mid = solve_all(mid);
    if (mass(y_mid) > target) {
      lo = mid;
    } else {
      hi = mid;
      y_hi = std::move(y_mid);
    }
    if (hi - lo <= 1e-15 * hi) break;
  }

  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::copysign(y_hi[i] * amax, v[i]);
  const double n = lp_norm(out, p);
  if (n > radius) {
    for (double& x : out) x *= radius / n;
  }
  return out;
}

Matrix project_to_ball(const Matrix& w, const BallConstraint& c) {
  const double current = matrix_norm(w, c.kind);
  if (current <= c.radius) return w;

  Matrix out;
  switch (c.kind.tag()) {
    case NormKind::Tag::frobenius:
      out = (c.radius / current) * w;
      break;
    case NormKind::Tag::spectral: {
      const SvdResult d = svd(w);
      Vector s = d.singular;
      for (double& x : s) x = std::min(x, c.radius);
      out = reconstruct(d, s);
      break;
    }
    case NormKind::Tag::schatten: {
      const SvdResult d = svd(w);
      out = reconstruct(d, project_lp_ball(d.singular, c.kind.p(), c.radius));
      break;
    }
    case NormKind::Tag::rows_l1_max: {
      out = w;
      for (std::size_t i = 0; i < w.rows(); ++i) {
        const Vector r = project_l1_ball(w.row(i), c.radius);
        std::copy(r.begin(), r.end(), out.row(i).begin());
      }
      break;
    }
    case NormKind::Tag::rows_l2_sum: {
      Vector row_norms(w.rows());
      for (std::size_t i = 0; i < w.rows(); ++i) row_norms[i] = norm2(w.row(i));
      const Vector shrunk = project_l1_ball(row_norms, c.radius);
      out = w;
      for (std::size_t i = 0; i < w.rows(); ++i) {
        const double f = row_norms[i] > 0.0 ? shrunk[i] / row_norms[i] : 0.0;
        for (double& x : out.row(i)) x *= f;
      }
      break;
    }
  }
  // Reconstruction round-off can leave the result a few ulps outside.
  const double n = matrix_norm(out, c.kind);
  if (n > c.radius) out *= c.radius / n;
  return out;
}

}  // namespace capnet
