#pragma once

// Singular value decomposition, the matrix norms that norm-based capacity
// bounds are stated in, and Euclidean projections onto the matching balls.

#include <limits>
#include <optional>
#include <span>
#include <string>

#include "capnet/matrix.hpp"

namespace capnet {

// Largest dimension the dense routines are documented for.
inline constexpr std::size_t kMaxMatrixDim = 1024;

struct SvdResult {
  Matrix left;      // rows x k, orthonormal columns
  Vector singular;  // k values, non-increasing, >= 0
  Matrix right;     // cols x k, orthonormal columns
};

struct SvdOptions {
  int max_sweeps = 100;
  double tolerance = 1e-12;  // relative off-diagonal tolerance
};

// One-sided (Hestenes) Jacobi SVD. Deterministic; throws NumericalError when
// the sweep cap is hit before convergence.
SvdResult svd(const Matrix& w, const SvdOptions& options = {});

// Singular values only (same algorithm, no vectors returned).
Vector singular_values(const Matrix& w);

class NormKind {
 public:
  enum class Tag { spectral, frobenius, schatten, rows_l2_sum, rows_l1_max };

  static constexpr double kMaxSchattenP = 64.0;

  static NormKind spectral() { return NormKind(Tag::spectral, kInf); }
  static NormKind frobenius() { return NormKind(Tag::frobenius, 2.0); }
  // p in [1, 64], or +inf which maps to the spectral tag.
  static NormKind schatten(double p);
  // ||W^T||_{2,1}: sum of the Euclidean norms of the rows of W.
  static NormKind rows_l2_sum() { return NormKind(Tag::rows_l2_sum, 0.0); }
  // ||W||_{1,inf}: max over rows of the row's l1 norm.
  static NormKind rows_l1_max() { return NormKind(Tag::rows_l1_max, 0.0); }

  Tag tag() const noexcept { return tag_; }
  // Schatten exponent; inf for spectral, 2 for frobenius, 0 otherwise.
  double p() const noexcept { return p_; }
  bool is_unitarily_invariant() const noexcept {
    return tag_ == Tag::spectral || tag_ == Tag::frobenius ||
           tag_ == Tag::schatten;
  }
  std::string name() const;

  friend bool operator==(const NormKind&, const NormKind&) = default;

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  NormKind(Tag tag, double p) : tag_(tag), p_(p) {}
  Tag tag_;
  double p_;
};

// Parses "spectral", "frobenius", "schatten:<p>", "rows-l2-sum",
// "rows-l1-max"; throws InvalidArgument otherwise.
NormKind parse_norm_kind(const std::string& text);

double matrix_norm(const Matrix& w, NormKind kind);

// (sum |v_i|^p)^{1/p}, computed with max-scaling; p = inf gives max |v_i|.
double lp_norm(std::span<const double> v, double p);

struct Rank1Approximation {
  Matrix approx;          // s u v^T
  double spectral_error;  // ||w - approx|| = second singular value
  double leading_singular;
  Vector u;
  Vector v;
};

// Best rank-1 approximation from the top singular triple. A zero matrix
// yields a zero approximation with error 0 and u, v set to e_1.
Rank1Approximation rank1_approx(const Matrix& w);

struct BallConstraint {
  BallConstraint(NormKind kind, double radius);
  NormKind kind;
  double radius;
};

// Euclidean (Frobenius-distance) projection onto {W : norm(W) <= radius}.
// Inputs already inside the ball are returned unchanged.
Matrix project_to_ball(const Matrix& w, const BallConstraint& c);

// Euclidean projection of a vector onto the l1 ball (sorted threshold).
Vector project_l1_ball(std::span<const double> v, double radius);

// Euclidean projection of a vector onto the l_p ball, 1 <= p < inf.
Vector project_lp_ball(std::span<const double> v, double p, double radius);

}  // namespace capnet
