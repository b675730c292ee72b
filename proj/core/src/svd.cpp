#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "capnet/error.hpp"
#include "capnet/linalg.hpp"

namespace capnet {

namespace {

using Columns = std::vector<Vector>;

struct JacobiOutput {
  Columns u;       // tall side, m vectors of length rows
  Columns v;       // n vectors of length cols
  Vector sigma;
};

void rotate(Vector& a, Vector& b, double c, double s) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a[k];
    const double y = b[k];
    a[k] = c * x - s * y;
    b[k] = s * x + c * y;
  }
}

// Hestenes one-sided Jacobi on a tall (rows >= cols) matrix: rotates pairs of
// columns until every pair is orthogonal to relative tolerance `tol`.
JacobiOutput one_sided_jacobi(const Matrix& a, const SvdOptions& options,
                              bool want_vectors) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  Columns u(cols, Vector(rows));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) u[j][i] = a(i, j);

  Columns v;
  if (want_vectors) {
    v.assign(cols, Vector(cols, 0.0));
    for (std::size_t j = 0; j < cols; ++j) v[j][j] = 1.0;
  }

  bool converged = cols < 2;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < cols; ++i) {
      for (std::size_t j = i + 1; j < cols; ++j) {
        const double alpha = dot(u[i], u[i]);
        const double beta = dot(u[j], u[j]);
        const double gamma = dot(u[i], u[j]);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= options.tolerance * std::sqrt(alpha) * std::sqrt(beta))
          continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(u[i], u[j], c, s);
        if (want_vectors) rotate(v[i], v[j], c, s);
      }
    }
  }
  if (!converged) {
    throw NumericalError("svd: one-sided Jacobi did not converge within " +
                         std::to_string(options.max_sweeps) + " sweeps");
  }

  Vector sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    sigma[j] = norm2(u[j]);
    if (!std::isfinite(sigma[j])) throw NumericalError("svd: non-finite singular value");
  }

  // Stable descending order keeps ties in column order.
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  JacobiOutput out;
  out.sigma.reserve(cols);
  for (std::size_t k : order) out.sigma.push_back(sigma[k]);
  if (want_vectors) {
    out.u.reserve(cols);
    out.v.reserve(cols);
    for (std::size_t k : order) {
      out.u.push_back(std::move(u[k]));
      out.v.push_back(std::move(v[k]));
    }
  }
  return out;
}

// Normalizes the left vectors and replaces those of zero singular values by
// an orthonormal completion (Gram-Schmidt over the standard basis).
void finish_left_vectors(Columns& u, const Vector& sigma) {
  const std::size_t rows = u.empty() ? 0 : u.front().size();
  std::vector<bool> missing(u.size(), false);
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (sigma[j] > 0.0) {
      for (double& x : u[j]) x /= sigma[j];
    } else {
      missing[j] = true;
    }
  }
  std::size_t next_basis = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!missing[j]) continue;
    for (; next_basis < rows; ++next_basis) {
      Vector cand(rows, 0.0);
      cand[next_basis] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < u.size(); ++k) {
          if (k == j || (missing[k] && k > j)) continue;
          const double proj = dot(cand, u[k]);
          for (std::size_t i = 0; i < rows; ++i) cand[i] -= proj * u[k][i];
        }
      }
      const double n = norm2(cand);
      if (n > 0.5) {
        for (double& x : cand) x /= n;
        u[j] = std::move(cand);
        missing[j] = false;
        ++next_basis;
        break;
      }
    }
    if (missing[j]) throw NumericalError("svd: could not complete orthonormal basis");
  }
}

Matrix to_matrix(const Columns& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  return m;
}

void check_working_range(const Matrix& w) {
  if (w.empty()) throw ShapeError("svd: empty matrix");
  if (std::max(w.rows(), w.cols()) > kMaxMatrixDim) {
    throw InvalidArgument("svd: matrix dimension exceeds " +
                          std::to_string(kMaxMatrixDim));
  }
}

}  // namespace

SvdResult svd(const Matrix& w, const SvdOptions& options) {
  check_working_range(w);
  const bool wide = w.rows() < w.cols();
  const Matrix tall = wide ? w.transpose() : w;
  JacobiOutput j = one_sided_jacobi(tall, options, /*want_vectors=*/true);
  finish_left_vectors(j.u, j.sigma);

  SvdResult r;
  r.singular = std::move(j.sigma);
  Matrix u = to_matrix(j.u, tall.rows());
  Matrix v = to_matrix(j.v, tall.cols());
  if (wide) {
    r.left = std::move(v);
    r.right = std::move(u);
  } else {
    r.left = std::move(u);
    r.right = std::move(v);
  }
  return r;
}

Vector singular_values(const Matrix& w) {
  check_working_range(w);
  const Matrix tall = w.rows() < w.cols() ? w.transpose() : w;
  return one_sided_jacobi(tall, SvdOptions{}, /*want_vectors=*/false).sigma;
}

}  // namespace capnet
