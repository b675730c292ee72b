// Property suites behind `capnet verify`. Each suite is a quick randomized
// pass over one family of guarantees; the acceptance tests run the full-size
// versions against independent oracles.

#include <cmath>
#include <random>
#include <sstream>

#include "cli.hpp"

#include "capnet/bounds.hpp"
#include "capnet/compress.hpp"
#include "capnet/cover.hpp"
#include "capnet/error.hpp"
#include "capnet/linalg.hpp"
#include "capnet/lowerbound.hpp"
#include "capnet/parallel.hpp"
#include "capnet/rademacher.hpp"
#include "capnet/random.hpp"

namespace capnet::cli {

namespace {

std::string fmt(double x) { return format_double(x); }

SuiteResult suite_norms(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  double worst_recon = 0.0;
  bool ok = true;
  for (int t = 0; t < 50; ++t) {
    const Matrix w = random_matrix(dim(rng), dim(rng), rng);
    const SvdResult s = svd(w);
    Matrix rec(w.rows(), w.cols());
    for (std::size_t k = 0; k < s.singular.size(); ++k) {
      for (std::size_t i = 0; i < w.rows(); ++i) {
        for (std::size_t j = 0; j < w.cols(); ++j) {
          rec(i, j) += s.left(i, k) * s.singular[k] * s.right(j, k);
        }
      }
    }
    rec -= w;
    worst_recon = std::max(worst_recon, norm2(rec.data()) / norm2(w.data()));
    const double spec = matrix_norm(w, NormKind::spectral());
    const double fro = matrix_norm(w, NormKind::frobenius());
    double prev = matrix_norm(w, NormKind::schatten(1.0));
    for (double p : {1.5, 2.0, 3.0, 8.0}) {
      const double v = matrix_norm(w, NormKind::schatten(p));
      ok = ok && v <= prev + 1e-10;
      prev = v;
    }
    ok = ok && prev >= spec - 1e-10 && spec <= fro + 1e-12 &&
         fro <= matrix_norm(w, NormKind::rows_l2_sum()) + 1e-12;
    for (const NormKind& kind : {NormKind::spectral(), NormKind::frobenius(),
                                 NormKind::schatten(1.0), NormKind::schatten(3.0),
                                 NormKind::rows_l1_max(), NormKind::rows_l2_sum()}) {
      const BallConstraint c(kind, 0.5 * matrix_norm(w, kind));
      const Matrix p1 = project_to_ball(w, c);
      const Matrix p2 = project_to_ball(p1, c);
      Matrix diff = p2;
      diff -= p1;
      ok = ok && matrix_norm(p1, kind) <= c.radius * (1.0 + 1e-9) &&
           max_abs_entry(diff) <= 1e-10 * std::max(1.0, max_abs_entry(p1));
    }
  }
  ok = ok && worst_recon <= 1e-10;
  return {"norms", ok, "50 matrices, worst relative reconstruction error " + fmt(worst_recon)};
}

SuiteResult suite_contraction(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<Matrix> F;
    for (int k = 0; k < 2; ++k) F.push_back(random_matrix(6, 3, rng));
    const InequalityCheck a =
        check_contraction_frobenius(F, 1.0, 0.3, Activation::relu, 32, derive_seed(seed, t));
    const InequalityCheck b =
        check_contraction_l1inf(F, 1.0, 0.3, Activation::relu, 32, derive_seed(seed, t));
    ok = ok && a.holds && b.holds;
    worst = std::max({worst, a.lhs / a.rhs, b.lhs / b.rhs});
  }
  return {"contraction", ok, "20 instances at m = 6, worst lhs/rhs " + fmt(worst)};
}

SuiteResult suite_union(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<Matrix> classes;
    for (int j = 0; j < 4; ++j) {
      Matrix c(8, 3);
      for (double& v : c.data()) v = u(rng);
      classes.push_back(std::move(c));
    }
    const InequalityCheck r = check_union_bound(classes, 1.0);
    ok = ok && r.holds;
    worst = std::max(worst, r.lhs / r.rhs);
  }
  return {"union", ok, "10 instances at m = 8, worst lhs/rhs " + fmt(worst)};
}

SuiteResult suite_cover(std::uint64_t seed) {
  bool ok = true;
  std::ostringstream detail;
  for (double eps : {0.5, 0.25}) {
    const LipschitzCover cover(1.0, eps);
    const double bound = std::pow(3.0, std::floor(2.0 / eps) + 1.0);
    const double d = verify_cover(cover, 50, seed);
    ok = ok && static_cast<double>(cover.member_count()) <= bound && d <= eps * (1.0 + 1e-6);
    detail << "eps " << eps << ": " << cover.member_count() << " members, max distance "
           << fmt(d) << "; ";
  }
  return {"cover", ok, detail.str()};
}

SuiteResult suite_certificate(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> depth(1, 5);
  std::uniform_int_distribution<std::size_t> width(1, 5);
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = depth(rng);
    std::vector<std::size_t> dims{width(rng)};
    for (std::size_t j = 1; j < d; ++j) dims.push_back(width(rng));
    dims.push_back(1);
    const Network net = random_network(dims, Activation::relu, derive_seed(seed, t));
    const std::size_t r = 1 + static_cast<std::size_t>(rng() % d);
    const CompressionResult res = rank1_replace(net, 2.0, r, 1.0);
    const CertificateCheck c = verify_certificate(net, res.compressed, res.cert, 1.0, 200, seed);
    ok = ok && c.within_lemma && c.within_theorem && certificate_consistent(res.cert);
    if (res.cert.theorem_bound > 0.0) worst = std::max(worst, c.max_deviation / res.cert.theorem_bound);
  }
  return {"certificate", ok, "10 networks, worst observed/theorem bound " + fmt(worst)};
}

SuiteResult suite_lowerbound(std::uint64_t seed) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto rows = demonstrate_lower_bound({2, 4, 8}, {8, 16}, {1.0, 2.0, inf}, seed);
  bool ok = true;
  double lo = inf;
  double hi = 0.0;
  for (const LowerBoundRow& r : rows) {
    ok = ok && r.ratio >= 0.2 && r.ratio <= 2.0 && r.witness <= r.diag * (1.0 + 1e-12);
    if (r.p == 2.0) ok = ok && r.scalar_ratio >= 0.6 && r.scalar_ratio <= 1.0;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  return {"lowerbound", ok, "18 grid points, ratios in [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

}  // namespace

std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed) {
  using Fn = SuiteResult (*)(std::uint64_t);
  const std::vector<std::pair<std::string, Fn>> all{
      {"norms", suite_norms},         {"contraction", suite_contraction},
      {"union", suite_union},         {"cover", suite_cover},
      {"certificate", suite_certificate}, {"lowerbound", suite_lowerbound},
  };
  std::vector<SuiteResult> out;
  for (const auto& [n, fn] : all) {
    if (name == "all" || name == n) out.push_back(fn(seed));
  }
  if (out.empty()) throw InvalidArgument("unknown suite '" + name + "'");
  return out;
}

}  // namespace capnet::cli
