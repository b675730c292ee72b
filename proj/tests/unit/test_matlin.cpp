#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "capnet/error.hpp"
#include "capnet/linalg.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace capnet;
using testing_support::entries;
using testing_support::frobenius_distance;
using testing_support::random_orthogonal;

namespace {

Matrix reconstruct(const SvdResult& s, std::size_t r, std::size_t c) {
  Matrix out(r, c);
  for (std::size_t k = 0; k < s.singular.size(); ++k)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) out(i, j) += s.left(i, k) * s.singular[k] * s.right(j, k);
  return out;
}

}  // namespace

TEST(Matrix, RejectsNonFiniteAndBadShapes) {
  EXPECT_THROW(Matrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
  EXPECT_THROW(Matrix(1, 1, {std::nan("")}), InvalidArgument);
  EXPECT_THROW(Matrix(0, 3), ShapeError);
}

TEST(Svd, IdentityAndDiagonal) {
  const SvdResult id = svd(Matrix::identity(3));
  for (double s : id.singular) EXPECT_DOUBLE_EQ(s, 1.0);

  const SvdResult d = svd(Matrix{{5, 0, 0}, {0, 3, 0}, {0, 0, 1}});
  EXPECT_NEAR(d.singular[0], 5.0, 1e-14);
  EXPECT_NEAR(d.singular[1], 3.0, 1e-14);
  EXPECT_NEAR(d.singular[2], 1.0, 1e-14);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::abs(d.left(i, i)), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(d.right(i, i)), 1.0, 1e-14);
  }
}

TEST(Svd, MatchesJacobiEigenOracle) {
  std::mt19937_64 rng(7);
  const Matrix w = random_matrix(4, 4, rng);
  const auto expected = oracle::singular_values(4, 4, entries(w));
  const SvdResult s = svd(w);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(s.singular[k], expected[k], 1e-8);
}

TEST(Svd, InvariantsOnRectangularShapes) {
  std::mt19937_64 rng(11);
  for (auto [r, c] : {std::pair{5, 3}, {3, 5}, {1, 4}, {6, 1}, {7, 7}}) {
    const Matrix w = random_matrix(r, c, rng);
    const SvdResult s = svd(w);
    const std::size_t k = std::min(r, c);
    ASSERT_EQ(s.singular.size(), k);
    for (std::size_t i = 1; i < k; ++i) EXPECT_GE(s.singular[i - 1], s.singular[i]);
    EXPECT_LE(frobenius_distance(reconstruct(s, r, c), w), 1e-10 * norm2(w.data()));
    const Matrix utu = s.left.transpose() * s.left;
    const Matrix vtv = s.right.transpose() * s.right;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        EXPECT_NEAR(utu(i, j), i == j ? 1.0 : 0.0, 1e-10);
        EXPECT_NEAR(vtv(i, j), i == j ? 1.0 : 0.0, 1e-10);
      }
  }
}

TEST(Svd, RankDeficientKeepsOrthonormalFactors) {
  const Matrix w{{1, 2}, {2, 4}, {0, 0}};
  const SvdResult s = svd(w);
  EXPECT_NEAR(s.singular[1], 0.0, 1e-12);
  const Matrix utu = s.left.transpose() * s.left;
  EXPECT_NEAR(utu(0, 1), 0.0, 1e-10);
  EXPECT_NEAR(utu(1, 1), 1.0, 1e-10);
}

TEST(Svd, DeterministicAndRangeChecked) {
  std::mt19937_64 rng(3);
  const Matrix w = random_matrix(6, 4, rng);
  EXPECT_EQ(svd(w).singular, svd(w).singular);
  EXPECT_THROW(svd(Matrix(1025, 1)), InvalidArgument);
}

TEST(Norms, DiagonalAndIdentityExamples) {
  const Matrix d{{3, 0}, {0, 4}};
  EXPECT_NEAR(matrix_norm(d, NormKind::spectral()), 4.0, 1e-14);
  EXPECT_NEAR(matrix_norm(d, NormKind::frobenius()), 5.0, 1e-14);
  EXPECT_NEAR(matrix_norm(d, NormKind::schatten(1)), 7.0, 1e-14);
  EXPECT_NEAR(matrix_norm(Matrix::identity(4), NormKind::schatten(2)), 2.0, 1e-14);
  EXPECT_NEAR(matrix_norm(Matrix::identity(4), NormKind::schatten(3)), std::cbrt(4.0), 1e-14);
}

TEST(Norms, RowNorms) {
  const Matrix w{{1, -2}, {3, 0.5}};
  EXPECT_DOUBLE_EQ(matrix_norm(w, NormKind::rows_l1_max()), 3.5);
  EXPECT_NEAR(matrix_norm(w, NormKind::rows_l2_sum()), std::sqrt(5.0) + std::sqrt(9.25), 1e-14);
}

TEST(Norms, SchattenThreeMatchesOracle) {
  std::mt19937_64 rng(5);
  const Matrix w = random_matrix(5, 3, rng);
  const auto s = oracle::singular_values(5, 3, entries(w));
  double sum = 0.0;
  for (double v : s) sum += v * v * v;
  EXPECT_NEAR(matrix_norm(w, NormKind::schatten(3)), std::cbrt(sum), 1e-9);
}

TEST(Norms, ParameterValidation) {
  EXPECT_THROW(NormKind::schatten(0.5), InvalidArgument);
  EXPECT_THROW(NormKind::schatten(65), InvalidArgument);
  EXPECT_EQ(NormKind::schatten(2).tag(), NormKind::Tag::frobenius);
  EXPECT_EQ(NormKind::schatten(std::numeric_limits<double>::infinity()).tag(), NormKind::Tag::spectral);
  EXPECT_EQ(parse_norm_kind("schatten:3").p(), 3.0);
  EXPECT_EQ(parse_norm_kind("rows-l1-max").tag(), NormKind::Tag::rows_l1_max);
  EXPECT_THROW(parse_norm_kind("nuclear"), InvalidArgument);
}

TEST(Norms, Schatten2EqualsFrobenius) {
  std::mt19937_64 rng(9);
  const Matrix w = random_matrix(4, 6, rng);
  const double fro = matrix_norm(w, NormKind::frobenius());
  EXPECT_NEAR(lp_norm(singular_values(w), 2.0), fro, 1e-12 * fro);
}

TEST(NormProperties, MonotonicityDominanceAndUnitaryInvariance) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    const std::size_t r = 1 + rng() % 6;
    const std::size_t c = 1 + rng() % 6;
    const Matrix w = random_matrix(r, c, rng);
    const double spec = matrix_norm(w, NormKind::spectral());
    const double fro = matrix_norm(w, NormKind::frobenius());
    const double nuc = matrix_norm(w, NormKind::schatten(1));
    EXPECT_LE(spec, fro + 1e-12);
    EXPECT_LE(fro, nuc + 1e-12);
    EXPECT_GE(matrix_norm(w, NormKind::rows_l2_sum()), fro - 1e-12);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      for (double q : {p, p + 0.5, 2 * p, 32.0}) {
        EXPECT_GE(matrix_norm(w, NormKind::schatten(p)), matrix_norm(w, NormKind::schatten(q)) - 1e-10);
      }
      EXPECT_GE(matrix_norm(w, NormKind::schatten(p)), spec - 1e-10);
      const Matrix u = random_orthogonal(r, rng);
      const Matrix v = random_orthogonal(c, rng);
      const double a = matrix_norm(u * w * v, NormKind::schatten(p));
      EXPECT_NEAR(a, matrix_norm(w, NormKind::schatten(p)), 1e-8 * a);
    }
  }
}

TEST(Rank1, DiagonalExampleAndTailBound) {
  const Matrix w{{5, 0, 0}, {0, 3, 0}, {0, 0, 1}};
  const Rank1Approximation a = rank1_approx(w);
  EXPECT_NEAR(a.spectral_error, 3.0, 1e-12);
  EXPECT_NEAR(std::abs(a.approx(0, 0)), 5.0, 1e-12);
  EXPECT_NEAR(max_abs_entry(a.approx - Matrix{{a.approx(0, 0), 0, 0}, {0, 0, 0}, {0, 0, 0}}), 0.0, 1e-12);
  const double lemma = std::sqrt(25 + 9 + 1 - 25.0);
  EXPECT_NEAR(lemma, 3.1623, 1e-4);
  EXPECT_GE(lemma, a.spectral_error);
}

TEST(Rank1, ExactOnRankOneAndZero) {
  const Matrix w = outer(2.0, std::vector<double>{0.6, 0.8}, std::vector<double>{1.0, 0.0, 0.0});
  const Rank1Approximation a = rank1_approx(w);
  EXPECT_NEAR(a.spectral_error, 0.0, 1e-12);
  EXPECT_LE(frobenius_distance(a.approx, w), 1e-12);

  const Rank1Approximation z = rank1_approx(Matrix(3, 2));
  EXPECT_EQ(z.spectral_error, 0.0);
  EXPECT_EQ(max_abs_entry(z.approx), 0.0);
}

TEST(Rank1, ErrorIsSecondSingularValue) {
  std::mt19937_64 rng(31);
  const Matrix w = random_matrix(4, 4, rng);
  const auto s = oracle::singular_values(4, 4, entries(w));
  const Rank1Approximation a = rank1_approx(w);
  EXPECT_NEAR(a.spectral_error, s[1], 1e-9);
  EXPECT_NEAR(matrix_norm(w - a.approx, NormKind::spectral()), s[1], 1e-9);
  for (double p : {1.0, 2.0, 4.0}) {
    EXPECT_LE(matrix_norm(a.approx, NormKind::schatten(p)), matrix_norm(w, NormKind::schatten(p)) + 1e-12);
  }
}

TEST(Projection, Examples) {
  Matrix w{{6, 0}, {0, 8}};
  const Matrix f = project_to_ball(w, BallConstraint(NormKind::frobenius(), 5));
  EXPECT_NEAR(f(0, 0), 3.0, 1e-14);
  EXPECT_NEAR(f(1, 1), 4.0, 1e-14);

  const Matrix s = project_to_ball(Matrix{{5, 0}, {0, 3}}, BallConstraint(NormKind::spectral(), 4));
  EXPECT_NEAR(s(0, 0), 4.0, 1e-12);
  EXPECT_NEAR(s(1, 1), 3.0, 1e-12);
  EXPECT_NEAR(s(0, 1), 0.0, 1e-12);

  const Matrix n = project_to_ball(Matrix{{3, 0}, {0, 1}}, BallConstraint(NormKind::schatten(1), 2));
  EXPECT_NEAR(n(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(n(1, 1), 0.0, 1e-12);
}

TEST(Projection, TraceNormGridSearchOracle) {
  // For diagonal inputs the projection is diagonal; search the feasible
  // singular-value pairs on a fine grid.
  const double a = 3.0, b = 1.0, radius = 2.0;
  double best = 1e9, bx = 0, by = 0;
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n - i; ++j) {
      const double x = radius * i / n, y = radius * j / n;
      const double d = (a - x) * (a - x) + (b - y) * (b - y);
      if (d < best) best = d, bx = x, by = y;
    }
  }
  const Matrix p = project_to_ball(Matrix{{a, 0}, {0, b}}, BallConstraint(NormKind::schatten(1), radius));
  EXPECT_NEAR(p(0, 0), bx, 2e-3);
  EXPECT_NEAR(p(1, 1), by, 2e-3);
  EXPECT_LE(std::sqrt((a - p(0, 0)) * (a - p(0, 0)) + (b - p(1, 1)) * (b - p(1, 1))), std::sqrt(best) + 1e-12);
}

TEST(Projection, InsideBallIsUnchanged) {
  const Matrix w{{0.1, 0.2}, {0.3, -0.1}};
  for (const NormKind& k : {NormKind::spectral(), NormKind::frobenius(), NormKind::schatten(1),
                            NormKind::schatten(3), NormKind::rows_l1_max(), NormKind::rows_l2_sum()}) {
    EXPECT_EQ(project_to_ball(w, BallConstraint(k, 10.0)), w);
  }
}

TEST(ProjectionProperties, FeasibleIdempotentAndOptimal) {
  std::mt19937_64 rng(41);
  const std::vector<NormKind> kinds{NormKind::spectral(),    NormKind::frobenius(),
                                    NormKind::schatten(1),   NormKind::schatten(1.5),
                                    NormKind::schatten(3),   NormKind::rows_l1_max(),
                                    NormKind::rows_l2_sum()};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const NormKind& kind : kinds) {
    const Matrix w = random_matrix(3, 3, rng);
    const BallConstraint c(kind, 0.4 * matrix_norm(w, kind));
    const Matrix p = project_to_ball(w, c);
    EXPECT_LE(matrix_norm(p, kind), c.radius * (1 + 1e-9)) << kind.name();
    const Matrix pp = project_to_ball(p, c);
    EXPECT_LE(max_abs_entry(pp - p), 1e-10) << kind.name();
    const double dist = frobenius_distance(w, p);
    for (int t = 0; t < 1000; ++t) {
      Matrix q = random_matrix(3, 3, rng);
      q *= c.radius * unit(rng) / matrix_norm(q, kind);
      EXPECT_LE(dist, frobenius_distance(w, q) + 1e-8) << kind.name();
    }
  }
}

TEST(Projection, InvalidRadius) {
  EXPECT_THROW(BallConstraint(NormKind::spectral(), 0.0), InvalidArgument);
  EXPECT_THROW(BallConstraint(NormKind::spectral(), -1.0), InvalidArgument);
}
