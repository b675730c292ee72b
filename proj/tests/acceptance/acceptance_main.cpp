// Acceptance run: every criterion at full size, one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails or overruns its budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capnet/bounds.hpp"
#include "capnet/compress.hpp"
#include "capnet/cover.hpp"
#include "capnet/linalg.hpp"
#include "capnet/lowerbound.hpp"
#include "capnet/parallel.hpp"
#include "capnet/rademacher.hpp"
#include "capnet/random.hpp"
#include "cli.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace capnet;
using oracle::hp;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> body;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string data_file(const std::string& name) { return std::string(CAPNET_TEST_DATA) + "/" + name; }

Matrix reconstruct(const SvdResult& s, std::size_t r, std::size_t c) {
  Matrix out(r, c);
  for (std::size_t k = 0; k < s.singular.size(); ++k)
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) out(i, j) += s.left(i, k) * s.singular[k] * s.right(j, k);
  return out;
}

Outcome norm_oracle_suite() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> dim(1, 16);
  const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, 4.0, 8.0, 32.0, kInf};
  double worst_recon = 0.0, worst_unitary = 0.0;
  int monotone_failures = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = dim(rng), c = dim(rng);
    const Matrix w = random_matrix(r, c, rng);
    const SvdResult s = svd(w);
    worst_recon = std::max(worst_recon,
                           testing_support::frobenius_distance(reconstruct(s, r, c), w) / norm2(w.data()));
    const Matrix u = testing_support::random_orthogonal(r, rng);
    const Matrix v = testing_support::random_orthogonal(c, rng);
    const Matrix rotated = u * w * v;
    double prev = kInf;
    for (double p : ps) {
      const NormKind kind = NormKind::schatten(p);
      const double a = matrix_norm(w, kind);
      if (a > prev * (1 + 1e-12)) ++monotone_failures;
      prev = a;
      worst_unitary = std::max(worst_unitary, std::abs(matrix_norm(rotated, kind) - a) / a);
    }
  }
  Outcome o;
  o.ok = monotone_failures == 0 && worst_unitary <= 1e-8 && worst_recon <= 1e-10;
  o.detail = "200 matrices up to 16x16; monotonicity failures " + std::to_string(monotone_failures) +
             ", worst unitary drift " + num(worst_unitary) + ", worst reconstruction " + num(worst_recon);
  return o;
}

Outcome rank_one_lemma() {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> dim(2, 8);
  double worst_s2 = 0.0;
  int lemma_failures = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = dim(rng), c = dim(rng);
    const Matrix w = random_matrix(r, c, rng);
    const auto s = oracle::singular_values(r, c, {w.data().begin(), w.data().end()});
    const Rank1Approximation a = rank1_approx(w);
    worst_s2 = std::max(worst_s2, std::abs(a.spectral_error - s[1]));
    for (double p : {1.0, 2.0, 4.0}) {
      hp sum = 0;
      for (double v : s) sum += pow(hp(v), p);
      const hp rhs = pow(sum - pow(hp(s[0]), p), 1 / hp(p));
      if (a.spectral_error > static_cast<double>(rhs) * (1 + 1e-12) + 1e-15) ++lemma_failures;
    }
  }
  Outcome o;
  o.ok = worst_s2 <= 1e-9 && lemma_failures == 0;
  o.detail = "100 matrices; worst |error - s2| " + num(worst_s2) + ", lemma violations " +
             std::to_string(lemma_failures);
  return o;
}

Network random_relu_net(std::mt19937_64& rng, std::uint64_t seed) {
  std::uniform_int_distribution<std::size_t> depth(1, 8), width(1, 8);
  const std::size_t d = depth(rng);
  std::vector<std::size_t> dims{width(rng)};
  for (std::size_t j = 1; j < d; ++j) dims.push_back(width(rng));
  dims.push_back(width(rng));
  return random_network(dims, Activation::relu, seed);
}

Outcome certificate_soundness() {
  std::mt19937_64 rng(1003);
  const double ps[3] = {1.0, 2.0, 4.0};
  int failures = 0, degenerate = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Network net = random_relu_net(rng, derive_seed(1003, t));
    const std::size_t r = 1 + rng() % net.depth();
    const double p = ps[rng() % 3];
    const double B = 0.5 + static_cast<double>(rng() % 4);
    const CompressionResult res = rank1_replace(net, p, r, B);
    degenerate += res.cert.degenerate_zero;
    const CertificateCheck c = verify_certificate(net, res.compressed, res.cert, B, 1000, derive_seed(7, t));
    if (!c.within_lemma || !c.within_theorem || !certificate_consistent(res.cert)) ++failures;
    if (res.cert.theorem_bound > 0) worst = std::max(worst, c.max_deviation / res.cert.theorem_bound);
  }
  Outcome o;
  o.ok = failures == 0;
  o.detail = "100 nets (" + std::to_string(degenerate) + " zero-layer fallbacks), failures " +
             std::to_string(failures) + ", worst observed/theorem " + num(worst);
  return o;
}

Outcome factorization_identity() {
  std::mt19937_64 rng(1004);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    Network net = random_relu_net(rng, derive_seed(1004, t));
    // Unit spectral layers keep outputs O(1) so the absolute tolerance is meaningful.
    for (std::size_t j = 1; j <= net.depth(); ++j) {
      Matrix w = net.layer(j).weight;
      w *= 1.0 / matrix_norm(w, NormKind::spectral());
      net = net.with_weight(j, w);
    }
    const std::size_t r = 1 + rng() % net.depth();
    const CompressionResult res = rank1_replace(net, 2.0, r, 1.0);
    const Factorization f = factor_compressed(res.compressed, res.cert.r_prime);
    for (int i = 0; i < 100; ++i) {
      Vector x(net.input_dim());
      for (double& v : x) v = g(rng);
      const Vector a = forward(res.compressed, x);
      const Vector b = f.chain(forward(f.shallow, x)[0]);
      for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
  }
  Outcome o;
  o.ok = worst <= 1e-10;
  o.detail = "50 nets x 100 points, worst difference " + num(worst);
  return o;
}

Outcome exact_constant_bounds() {
  const Network one({Layer{Matrix{{1.0}}, {}}});
  const Dataset four({{1.0}, {-1.0}, {1.0}, {1.0}});
  const double fro_peel = bound_frobenius_sqrtd(profile(one, 2), four).value;
  const hp fro_hp = (sqrt(2 * log(hp(2))) + 1) / 2;
  const double err1 = std::abs(fro_peel - static_cast<double>(fro_hp));

  const Network two({Layer{Matrix::identity(2), Activation::relu}, Layer{Matrix{{1.0, 0.0}}, {}}});
  const Dataset e1({{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  const double l1_peel = bound_l1inf_sqrtd(profile(two, 2), e1).value;
  const double err2 = std::abs(l1_peel - static_cast<double>(sqrt(3 + log(hp(2)))));

  int dominance_failures = 0;
  const Dataset data({{0.6, 0.8}, {1.0, 0.0}, {0.0, -1.0}});
  for (std::size_t d = 2; d <= 64; ++d) {
    for (double mf : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      NormProfile prof;
      prof.layers.resize(d);
      prof.frobenius_product = std::pow(mf, static_cast<double>(d));
      if (bound_frobenius_sqrtd(prof, data).weak_form > bound_ney15(prof, data.radius, data.size()))
        ++dominance_failures;
    }
  }
  Outcome o;
  o.ok = err1 <= 1e-12 && err2 <= 1e-12 && dominance_failures == 0;
  o.detail = "Frobenius peeling " + num(fro_peel) + " (err " + num(err1) + "), l1,inf peeling " + num(l1_peel) +
             " (err " + num(err2) + "), weak-form dominance failures " + std::to_string(dominance_failures) +
             " over d=2..64";
  return o;
}

Outcome estimator_consistency() {
  // Linear class ||w|| <= 1 against E||sum eps x|| / m by enumeration.
  const Dataset data = random_sphere_dataset(10, 3, 1.0, 1006);
  const double exact = oracle::sign_average(10, [&](const std::vector<int>& eps) {
    Vector s(3, 0.0);
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 3; ++j) s[j] += eps[i] * data.points[i][j];
    return norm2(s);
  }) / 10.0;
  const ClassSpec linear(Network({Layer{Matrix(1, 3), {}}}),
                         {LayerSpec{{BallConstraint(NormKind::frobenius(), 1.0)}}});
  const RademacherEstimate lin = mc_rademacher(linear, data, 1000, AscentOptions{}, 42);
  const double z = std::abs(lin.value - exact) / lin.std_error;
  bool ok = z <= 3.0;
  std::string detail = "linear class: MC " + num(lin.value) + " vs exact " + num(exact) + " (" + num(z) +
                       " std errors)";

  // Frobenius-constrained ReLU classes against the peeling bound.
  struct Shape {
    std::vector<std::size_t> dims;
    std::size_t m;
  };
  const std::vector<Shape> shapes{{{2, 2, 1}, 6},    {{3, 2, 1}, 8},       {{2, 3, 2, 1}, 10},
                                  {{3, 1}, 12},      {{2, 2, 2, 2, 1}, 12}, {{3, 3, 1}, 12}};
  int violations = 0;
  double worst_ratio = 0.0;
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const Shape& sh = shapes[s];
    std::vector<Layer> layers;
    std::vector<LayerSpec> specs;
    double budget = 1.0;
    for (std::size_t j = 0; j + 1 < sh.dims.size(); ++j) {
      const bool last = j + 2 == sh.dims.size();
      layers.push_back(Layer{Matrix(sh.dims[j + 1], sh.dims[j]),
                             last ? std::optional<Activation>() : Activation::relu});
      const double rad = radius(rng);
      budget *= rad;
      specs.push_back(LayerSpec{{BallConstraint(NormKind::frobenius(), rad)}});
    }
    const ClassSpec spec(Network(layers), specs);
    const Dataset pts = random_sphere_dataset(sh.m, sh.dims[0], 1.0 + static_cast<double>(s % 3), derive_seed(1006, s));
    AscentOptions opts;
    opts.steps = 200;
    const RademacherEstimate est = mc_rademacher(spec, pts, 40, opts, derive_seed(42, s));
    NormProfile prof;
    prof.layers.resize(layers.size());
    prof.frobenius_product = budget;
    const double bound = bound_frobenius_sqrtd(prof, pts).value;
    if (est.value > bound) ++violations;
    worst_ratio = std::max(worst_ratio, est.value / bound);
  }
  ok = ok && violations == 0;
  detail += "; ReLU classes: " + std::to_string(shapes.size()) + " shapes, violations " +
            std::to_string(violations) + ", worst estimate/bound " + num(worst_ratio);
  return {ok, detail};
}

Outcome contraction_harnesses() {
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<std::size_t> m_dist(2, 8), q_dist(1, 4), k_dist(1, 3);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  int fro_fail = 0, l1_fail = 0;
  double worst_fro = 0.0, worst_l1 = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = m_dist(rng), q = q_dist(rng), K = k_dist(rng);
    std::vector<Matrix> F;
    for (std::size_t k = 0; k < K; ++k) F.push_back(random_matrix(m, q, rng));
    const double R = 2.0 * unit(rng), lambda = unit(rng);
    const Activation sigma = t % 2 == 0 ? Activation::relu : Activation::identity;
    const InequalityCheck a = check_contraction_frobenius(F, R, lambda, sigma, 64, derive_seed(1007, t));
    const InequalityCheck b = check_contraction_l1inf(F, R, lambda, sigma, 64, derive_seed(2007, t));
    fro_fail += !(a.holds && a.lhs <= a.rhs * (1 + 1e-9));
    l1_fail += !(b.holds && b.lhs <= b.rhs * (1 + 1e-9));
    worst_fro = std::max(worst_fro, a.lhs / a.rhs);
    worst_l1 = std::max(worst_l1, b.lhs / b.rhs);
  }
  Outcome o;
  o.ok = fro_fail == 0 && l1_fail == 0;
  o.detail = "50 instances each (m <= 8); Frobenius failures " + std::to_string(fro_fail) + " (worst lhs/rhs " +
             num(worst_fro) + "), l1 failures " + std::to_string(l1_fail) + " (worst " + num(worst_l1) + ")";
  return o;
}

Outcome union_lemma() {
  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<std::size_t> m_dist(2, 16), r_dist(1, 8), k_dist(1, 4);
  int failures = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = m_dist(rng), r = r_dist(rng);
    const double A = 0.5 + static_cast<double>(t % 4);
    std::uniform_real_distribution<double> u(-A, A);
    std::vector<Matrix> classes;
    for (std::size_t j = 0; j < r; ++j) {
      Matrix c(m, k_dist(rng));
      for (double& v : c.data()) v = u(rng);
      classes.push_back(std::move(c));
    }
    const InequalityCheck c = check_union_bound(classes, A);
    // Recompute the right-hand side from the pieces with the proof's constant.
    double best = 0.0;
    for (const Matrix& cl : classes) best = std::max(best, exact_rademacher(cl).value);
    const double rhs = best + 2 * std::sqrt(2.0) * A * std::sqrt(std::log(double(r))) / std::sqrt(double(m));
    if (!c.holds || std::abs(c.rhs - rhs) > 1e-12 * rhs || c.lhs > rhs) ++failures;
    worst = std::max(worst, c.lhs / rhs);
  }
  Outcome o;
  o.ok = failures == 0;
  o.detail = "50 instances, failures " + std::to_string(failures) + ", worst lhs/rhs " + num(worst);
  return o;
}

Outcome cover_construction() {
  bool ok = true;
  std::string detail;
  for (double eps : {0.5, 0.25}) {
    const LipschitzCover cover(1.0, eps);
    const double cap = std::pow(3.0, std::floor(2.0 / eps) + 1.0);
    ok = ok && static_cast<double>(cover.member_count()) <= cap;
    std::vector<PiecewiseLinear> members;
    for (std::size_t k = 0; k < cover.member_count(); ++k) members.push_back(cover.member(k));
    // Dense grid at eps/16 contains every knot of f and of the members, so
    // the sup of the piecewise-linear difference is attained on it.
    const int n = static_cast<int>(std::lround(32.0 / eps));
    std::vector<double> xs(n + 1);
    for (int k = 0; k <= n; ++k) xs[k] = -1.0 + 2.0 * k / n;
    std::vector<std::vector<double>> member_vals(members.size(), std::vector<double>(xs.size()));
    for (std::size_t k = 0; k < members.size(); ++k)
      for (std::size_t i = 0; i < xs.size(); ++i) member_vals[k][i] = members[k](xs[i]);
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      const PiecewiseLinear f = random_lipschitz_function(1.0, eps / 4, derive_seed(1009, t));
      std::vector<double> fv(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) fv[i] = f(xs[i]);
      double best = kInf;
      for (const auto& mv : member_vals) {
        double sup = 0.0;
        for (std::size_t i = 0; i < xs.size() && sup < best; ++i) sup = std::max(sup, std::abs(fv[i] - mv[i]));
        best = std::min(best, sup);
      }
      worst = std::max(worst, best);
    }
    ok = ok && worst <= eps * (1 + 1e-6);
    detail += "eps " + num(eps) + ": " + std::to_string(cover.member_count()) + " members (cap " + num(cap) +
              "), worst distance " + num(worst) + "; ";
  }
  return {ok, detail};
}

Outcome lower_bound_demo() {
  const auto rows = demonstrate_lower_bound({2, 4, 8}, {8, 16}, {1.0, 2.0, kInf}, 42);
  bool ok = rows.size() == 18;
  double lo = kInf, hi = 0.0, slo = kInf, shi = 0.0;
  for (const LowerBoundRow& r : rows) {
    ok = ok && r.ratio >= 0.2 && r.ratio <= 2.0;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    if (r.p == 2.0) {
      ok = ok && r.scalar_ratio >= 0.6 && r.scalar_ratio <= 1.0;
      slo = std::min(slo, r.scalar_ratio);
      shi = std::max(shi, r.scalar_ratio);
    }
  }
  return {ok, "18 grid points, ratios in [" + num(lo) + ", " + num(hi) + "], p=2 scalar-chain ratios in [" +
                  num(slo) + ", " + num(shi) + "]"};
}

Outcome depth_sweep() {
  cli::SweepOptions opts;
  opts.depths.clear();
  for (std::size_t d = 2; d <= 64; ++d) opts.depths.push_back(d);
  opts.samples = 0;
  const auto rows = cli::run_sweep(opts);
  const std::string csv = cli::render_sweep_csv(rows);
  std::ofstream("acceptance_sweep.csv") << csv;

  const double c = 2.0 * std::log(2.0);
  int ney_fail = 0, peel_fail = 0, flat_fail = 0, active = 0;
  double flat_ref = -1.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k > 0) {
      const cli::SweepRow& a = rows[k - 1];
      const cli::SweepRow& b = rows[k];
      if (b.ney15 != 2.0 * a.ney15) ++ney_fail;
      const double expected = (std::sqrt(c * b.depth) + 1) / (std::sqrt(c * a.depth) + 1);
      if (std::abs(b.frobenius_sqrtd / a.frobenius_sqrtd - expected) > 1e-12 * expected) ++peel_fail;
    }
    if (rows[k].first_branch_active) {
      ++active;
      if (flat_ref < 0) flat_ref = rows[k].depth_independent;
      if (std::abs(rows[k].depth_independent - flat_ref) > 1e-9 * flat_ref) ++flat_fail;
    }
  }
  Outcome o;
  o.ok = ney_fail == 0 && peel_fail == 0 && flat_fail == 0 && active > 0 && cli::sweep_is_flat(rows);
  o.detail = "depths 2..64 (CSV in acceptance_sweep.csv); doubling failures " + std::to_string(ney_fail) +
             ", depth-factor failures " + std::to_string(peel_fail) + ", " + std::to_string(active) +
             " rows on the depth-free branch at " + num(flat_ref) + ", flatness failures " + std::to_string(flat_fail);
  return o;
}

Outcome tuning_lemma() {
  const std::vector<double> alphas{0.25, 0.5, 1.0, 1.5, 2.0}, betas{0.25, 0.5, 1.0}, bs{1, 2, 4, 8}, cs{1, 2, 4, 8};
  const std::vector<double> ns{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  std::size_t points = 0, in_regime = 0, violations = 0, outside = 0;
  std::string example;
  for (double a : alphas)
    for (double be : betas)
      for (double b : bs)
        for (double c : cs)
          for (double n : ns)
            for (std::size_t d = 1; d <= 64; ++d) {
              ++points;
              // Independent scan, compared with tune_r and the closed form.
              double inner = kInf;
              for (std::size_t r = 1; r <= d; ++r)
                inner = std::min(inner, c * std::pow(double(r), a) / n + b / std::pow(double(r), be));
              const double lhs = std::min(inner, std::pow(double(d), a) / n);
              const double rhs = std::min(3 * std::pow(b, a / (a + be)) / std::pow(n / c, be / (a + be)),
                                          std::pow(double(d), a) / n);
              const TunedDepth t = tune_r(a, be, b, c, n, d);
              const bool agree = t.value == lhs && std::abs(t.lemma_rhs - rhs) <= 1e-12 * rhs;
              const bool holds = lhs <= rhs * (1 + 1e-12);
              if (b * n / c >= 1.0) {
                ++in_regime;
                if (!holds || !agree) ++violations;
              } else if (!holds) {
                if (outside++ == 0) {
                  example = "alpha=" + num(a) + " beta=" + num(be) + " b=" + num(b) + " c=" + num(c) +
                            " n=" + num(n) + " d=" + std::to_string(d);
                }
              }
            }
  Outcome o;
  o.ok = violations == 0;
  o.detail = std::to_string(points) + " grid points, " + std::to_string(in_regime) +
             " with bn/c >= 1: violations " + std::to_string(violations) + "; with bn/c < 1 the stated bound fails at " +
             std::to_string(outside) + " points" + (example.empty() ? "" : " (e.g. " + example + ")");
  return o;
}

std::string run_captured(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str() + "\n--\n" + err.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::current_path() / "acceptance_determinism";
  fs::create_directories(dir);
  const std::string net = data_file("relu_net.json"), data = data_file("points.json");
  const std::vector<std::vector<std::string>> commands{
      {"report", "--network", net, "--data", data},
      {"report", "--network", net, "--data", data, "--format", "structured"},
      {"report", "--network", net, "--data", data, "--format", "csv"},
      {"compress", "--network", net, "--data", data, "--r", "2", "--samples", "500"},
      {"rademacher", "--network", net, "--data", data, "--samples", "24", "--restarts", "3", "--steps", "100"},
      {"lowerbound"},
      {"sweep", "--depths", "1,2,4,8,16", "--samples", "12", "--restarts", "2", "--steps", "60"},
      {"verify", "--suite", "all"},
  };
  int mismatches = 0, failures = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    std::vector<std::string> reference;
    for (const char* threads : {"1", "2", "4"}) {
      setenv("CAPNET_THREADS", threads, 1);
      const fs::path out = dir / ("out_" + std::to_string(k) + "_" + threads);
      std::vector<std::string> args = commands[k];
      args.push_back("--out");
      args.push_back(out.string());
      int code = 0;
      std::string captured = run_captured(args, code);
      failures += code != 0;
      for (const fs::path& p : {out, fs::path(out.string() + ".certificate.json")}) {
        if (!fs::exists(p)) continue;
        std::ifstream in(p, std::ios::binary);
        captured += std::string(std::istreambuf_iterator<char>(in), {});
      }
      // Paths differ between runs; compare everything else.
      for (std::size_t pos; (pos = captured.find(out.string())) != std::string::npos;)
        captured.replace(pos, out.string().size(), "<out>");
      reference.push_back(captured);
    }
    if (reference[1] != reference[0] || reference[2] != reference[0]) ++mismatches;
  }
  unsetenv("CAPNET_THREADS");
  Outcome o;
  o.ok = mismatches == 0 && failures == 0;
  o.detail = std::to_string(commands.size()) + " commands x CAPNET_THREADS {1,2,4}; mismatches " +
             std::to_string(mismatches) + ", nonzero exits " + std::to_string(failures);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "norm oracle suite", 10, norm_oracle_suite},
      {2, "rank-1 approximation error", 5, rank_one_lemma},
      {3, "compression certificate soundness", 60, certificate_soundness},
      {4, "factorization identity", 30, factorization_identity},
      {5, "exact-constant bounds", 1, exact_constant_bounds},
      {6, "estimator consistency", 120, estimator_consistency},
      {7, "contraction harnesses", 60, contraction_harnesses},
      {8, "union bound", 30, union_lemma},
      {9, "Lipschitz cover", 30, cover_construction},
      {10, "lower-bound demonstration", 60, lower_bound_demo},
      {11, "depth-independence sweep", 5, depth_sweep},
      {12, "r-tuning scan", 5, tuning_lemma},
      {13, "CLI determinism", 60, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    failed += !pass;
    std::printf("%s [%2d] %s (%.2fs, limit %gs%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.limit_s, in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
