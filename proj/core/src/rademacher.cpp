#include "capnet/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "capnet/error.hpp"
#include "capnet/parallel.hpp"
#include "enumerate.hpp"

namespace capnet {

namespace {

constexpr std::size_t kDykstraIterations = 200;

bool satisfies(const Matrix& w, const BallConstraint& c) {
  return matrix_norm(w, c.kind) <= c.radius * (1.0 + 1e-9);
}

void apply_mask(Matrix& w, LayerStructure s) {
  if (s != LayerStructure::diagonal) return;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      if (i != j) w(i, j) = 0.0;
    }
  }
}

// Largest norm/radius ratio over the constraints.
double violation(const Matrix& w, const LayerSpec& spec) {
  double worst = 0.0;
  for (const BallConstraint& c : spec.constraints) {
    worst = std::max(worst, matrix_norm(w, c.kind) / c.radius);
  }
  return worst;
}

void rescale_into(Matrix& w, const LayerSpec& spec) {
  const double v = violation(w, spec);
  if (v > 1.0) w *= 1.0 / v;
}

double layer_radius(const LayerSpec& spec) {
  double r = std::numeric_limits<double>::infinity();
  for (const BallConstraint& c : spec.constraints) r = std::min(r, c.radius);
  return std::isfinite(r) ? r : 1.0;
}

// Forward pass keeping pre-activations; returns the scalar output.
struct Tape {
  std::vector<Vector> inputs;  // z_{j-1}
  std::vector<Vector> pre;     // a_j = W_j z_{j-1}
};

double forward_tape(const Network& net, const std::vector<Matrix>& w,
                    std::span<const double> x, Tape& tape) {
  const std::size_t d = w.size();
  tape.inputs.resize(d);
  tape.pre.resize(d);
  Vector z(x.begin(), x.end());
  for (std::size_t j = 0; j < d; ++j) {
    tape.inputs[j] = z;
    const Matrix& W = w[j];
    Vector a(W.rows(), 0.0);
    for (std::size_t r = 0; r < W.rows(); ++r) {
      double s = 0.0;
      const auto row = W.row(r);
      for (std::size_t c = 0; c < W.cols(); ++c) s += row[c] * z[c];
      a[r] = s;
    }
    tape.pre[j] = a;
    const auto& act = net.layers()[j].activation;
    z = act ? apply_activation(*act, a) : a;
  }
  return z[0];
}

// Accumulates coef * dN/dW_j into grads.
void backward_tape(const Network& net, const std::vector<Matrix>& w, const Tape& tape,
                   double coef, std::vector<Matrix>& grads) {
  const std::size_t d = w.size();
  Vector delta{coef};
  for (std::size_t j = d; j-- > 0;) {
    const Vector& zin = tape.inputs[j];
    Matrix& G = grads[j];
    for (std::size_t r = 0; r < G.rows(); ++r) {
      if (delta[r] == 0.0) continue;
      auto row = G.row(r);
      for (std::size_t c = 0; c < G.cols(); ++c) row[c] += delta[r] * zin[c];
    }
    if (j == 0) break;
    // dN/dz_{j-1} = W_j^T delta
    const Matrix& W = w[j];
    Vector up(W.cols(), 0.0);
    for (std::size_t r = 0; r < W.rows(); ++r) {
      if (delta[r] == 0.0) continue;
      const auto row = W.row(r);
      for (std::size_t c = 0; c < W.cols(); ++c) up[c] += row[c] * delta[r];
    }
    const Vector& a = tape.pre[j - 1];
    const Activation act = *net.layers()[j - 1].activation;
    Vector next(a.size(), 0.0);
    switch (act) {
      case Activation::relu:
        for (std::size_t i = 0; i < a.size(); ++i) next[i] = a[i] > 0.0 ? up[i] : 0.0;
        break;
      case Activation::identity:
        next = up;
        break;
      case Activation::max_to_scalar: {
        // lowest-index maximizer takes the gradient
        const std::size_t k =
            static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
        next[k] = up[0];
        break;
      }
    }
    delta = std::move(next);
  }
}

struct Objective {
  const Network& net;
  const Dataset& data;
  std::vector<double> coef;  // scale * eps_i / m

  double value(const std::vector<Matrix>& w, Tape& tape) const {
    double s = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      s += coef[i] * forward_tape(net, w, data.points[i], tape);
    }
    return s;
  }

  double value_and_grad(const std::vector<Matrix>& w, Tape& tape,
                        std::vector<Matrix>& grads) const {
    for (Matrix& g : grads) g *= 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
      s += coef[i] * forward_tape(net, w, data.points[i], tape);
      backward_tape(net, w, tape, coef[i], grads);
    }
    return s;
  }
};

}  // namespace

void validate_signs(const SignVector& eps) {
  for (int e : eps) {
    if (e != 1 && e != -1) throw InvalidArgument("sign vectors may only contain +1 and -1");
  }
}

SignVector signs_from_bits(std::uint64_t code, std::size_t m) {
  SignVector eps(m);
  for (std::size_t i = 0; i < m; ++i) eps[i] = (code >> i) & 1U ? -1 : 1;
  return eps;
}

std::string to_string(EstimateMethod m) {
  return m == EstimateMethod::exact_enumeration ? "exact-enumeration" : "monte-carlo";
}

RademacherEstimate exact_rademacher(const Matrix& values) {
  const std::size_t m = values.rows();
  const std::size_t K = values.cols();
  if (m == 0 || K == 0) throw InvalidArgument("need at least one point and one function");
  if (m > kMaxExactSamples) {
    throw CapExceeded("exact enumeration is limited to m <= 22 (got m = " +
                      std::to_string(m) + "); use the Monte Carlo estimator instead");
  }
  // eps and -eps are handled together: their sums are exact negatives, so the
  // pair contributes max_k s_k - min_k s_k.
  const double total = detail::enumerate_sum(m - 1, [&](std::uint64_t first, std::uint64_t count) {
    Vector s(K);
    double acc = 0.0;
    for (std::uint64_t code = first; code < first + count; ++code) {
      std::fill(s.begin(), s.end(), 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        const auto row = values.row(i);
        if ((code >> i) & 1U) {
          for (std::size_t k = 0; k < K; ++k) s[k] -= row[k];
        } else {
          for (std::size_t k = 0; k < K; ++k) s[k] += row[k];
        }
      }
      const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
      acc += *hi - *lo;
    }
    return acc;
  });
  RademacherEstimate est;
  est.value = total / (std::ldexp(1.0, static_cast<int>(m)) * static_cast<double>(m));
  est.method = EstimateMethod::exact_enumeration;
  est.epsilon_samples = std::size_t{1} << m;
  return est;
}

ClassSpec::ClassSpec(Network t, std::vector<LayerSpec> l, double scale)
    : templ(std::move(t)), layers(std::move(l)), output_scale(scale) {
  if (layers.size() != templ.depth()) {
    throw ShapeError("class spec has " + std::to_string(layers.size()) +
                     " layer specs for a depth-" + std::to_string(templ.depth()) + " template");
  }
  if (templ.output_dim() != 1) throw ShapeError("class spec template must be scalar-valued");
  if (!std::isfinite(output_scale)) throw InvalidArgument("output scale must be finite");
  for (std::size_t j = 0; j < layers.size(); ++j) {
    if (layers[j].structure != LayerStructure::fixed && layers[j].constraints.empty()) {
      throw InvalidArgument("layer " + std::to_string(j + 1) +
                            " is trainable but has no norm constraint");
    }
  }
}

Matrix project_layer(const Matrix& w, const LayerSpec& spec) {
  Matrix x = w;
  apply_mask(x, spec.structure);
  if (spec.constraints.empty()) return x;
  if (spec.constraints.size() == 1) {
    x = project_to_ball(x, spec.constraints.front());
  } else {
    bool feasible = true;
    for (const BallConstraint& c : spec.constraints) feasible = feasible && satisfies(x, c);
    if (!feasible) {
      std::vector<Matrix> incr(spec.constraints.size(), Matrix(x.rows(), x.cols()));
      for (std::size_t it = 0; it < kDykstraIterations; ++it) {
        for (std::size_t c = 0; c < spec.constraints.size(); ++c) {
          Matrix y = x + incr[c];
          Matrix p = project_to_ball(y, spec.constraints[c]);
          incr[c] = y - p;
          x = std::move(p);
        }
      }
    }
  }
  apply_mask(x, spec.structure);
  rescale_into(x, spec);
  return x;
}

AscentResult sup_ascent(const SignVector& eps, const ClassSpec& spec, const Dataset& data,
                        const AscentOptions& opts, std::uint64_t seed) {
  validate_signs(eps);
  const Network& net = spec.templ;
  if (eps.size() != data.size()) throw ShapeError("sign vector length differs from m");
  if (data.dim() != net.input_dim()) {
    throw ShapeError("dataset dimension " + std::to_string(data.dim()) +
                     " does not match the class input dimension " +
                     std::to_string(net.input_dim()));
  }
  const std::size_t d = net.depth();
  const double m = static_cast<double>(data.size());
  Objective obj{net, data, {}};
  obj.coef.resize(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) obj.coef[i] = spec.output_scale * eps[i] / m;

  // Data correlation a = (1/m) sum eps_i x_i, used by the first two restarts.
  Vector corr(data.dim(), 0.0);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    for (std::size_t c = 0; c < data.dim(); ++c) corr[c] += eps[i] * data.points[i][c] / m;
  }
  double corr_max = 0.0;
  for (double v : corr) corr_max = std::max(corr_max, std::abs(v));

  // Zeroing any trainable layer gives the zero function, value 0. A class
  // with every layer fixed is a single function and has no such candidate.
  AscentResult best;
  const bool has_trainable =
      std::any_of(spec.layers.begin(), spec.layers.end(),
                  [](const LayerSpec& l) { return l.structure != LayerStructure::fixed; });
  if (!has_trainable) best.value = -std::numeric_limits<double>::infinity();
  Tape tape;
  std::vector<Matrix> grads;
  for (const Layer& l : net.layers()) grads.emplace_back(l.weight.rows(), l.weight.cols());

  const std::size_t restarts = has_trainable ? opts.restarts : 1;
  for (std::size_t restart = 0; restart < restarts; ++restart) {
    std::mt19937_64 rng(derive_seed(seed, restart));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Matrix> w;
    for (std::size_t j = 0; j < d; ++j) {
      const Matrix& t = net.layer(j + 1).weight;
      const LayerSpec& ls = spec.layers[j];
      if (ls.structure == LayerStructure::fixed) {
        w.push_back(t);
        continue;
      }
      Matrix init(t.rows(), t.cols());
      if (restart < 2) {
        // A very large matrix projects onto the boundary point that best
        // aligns with it (e.g. the l1 projection keeps only the largest entry).
        const double big = 1e9 * layer_radius(ls);
        for (std::size_t r = 0; r < t.rows(); ++r) {
          for (std::size_t c = 0; c < t.cols(); ++c) {
            init(r, c) = (j == 0 && corr_max > 0.0) ? big * corr[c] / corr_max : big;
          }
        }
        if (restart == 1 && j + 1 == d) init *= -1.0;
        w.push_back(project_layer(init, ls));
      } else {
        for (double& v : init.data()) v = gauss(rng);
        apply_mask(init, ls.structure);
        const double v = violation(init, ls);
        if (v > 0.0) init *= 1.0 / v;
        w.push_back(project_layer(init, ls));
      }
    }

    for (std::size_t t = 1; t <= opts.steps + 1; ++t) {
      const double val = obj.value_and_grad(w, tape, grads);
      if (val > best.value) {
        best.value = val;
        best.weights = w;
      }
      if (t == opts.steps + 1) break;
      const double eta = opts.step / std::sqrt(static_cast<double>(t));
      for (std::size_t j = 0; j < d; ++j) {
        const LayerSpec& ls = spec.layers[j];
        if (ls.structure == LayerStructure::fixed) continue;
        apply_mask(grads[j], ls.structure);
        const double gn = norm2(grads[j].data());
        if (gn == 0.0) continue;
        Matrix next = w[j];
        const double scale = eta * layer_radius(ls) / gn;
        for (std::size_t k = 0; k < next.size(); ++k) next.data()[k] += scale * grads[j].data()[k];
        w[j] = project_layer(next, ls);
      }
    }
  }
  return best;
}

RademacherEstimate mc_rademacher(const ClassSpec& spec, const Dataset& data,
                                 std::size_t epsilon_samples, const AscentOptions& opts,
                                 std::uint64_t seed) {
  if (epsilon_samples < 2) throw InvalidArgument("Monte Carlo needs at least 2 sign samples");
  const std::size_t m = data.size();
  std::vector<double> sups(epsilon_samples, 0.0);
  parallel_for(epsilon_samples, [&](std::size_t s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    SignVector eps(m);
    for (int& e : eps) e = (rng() >> 63) ? -1 : 1;
    sups[s] = sup_ascent(eps, spec, data, opts, rng()).value;
  });
  double mean = 0.0;
  for (double v : sups) mean += v;
  const double n = static_cast<double>(epsilon_samples);
  mean /= n;
  double var = 0.0;
  for (double v : sups) var += (v - mean) * (v - mean);
  var /= n - 1.0;

  RademacherEstimate est;
  est.value = mean;
  est.method = EstimateMethod::monte_carlo;
  est.epsilon_samples = epsilon_samples;
  est.sup_restarts = opts.restarts;
  est.sup_steps = opts.steps;
  est.std_error = std::sqrt(var / n);
  est.seed = seed;
  return est;
}

InequalityCheck check_union_bound(const std::vector<Matrix>& classes, double A) {
  if (classes.empty()) throw InvalidArgument("union bound needs at least one class");
  if (!(A > 0.0) || !std::isfinite(A)) throw InvalidArgument("A must be positive");
  const std::size_t m = classes.front().rows();
  std::size_t K = 0;
  for (const Matrix& c : classes) {
    if (c.rows() != m) throw ShapeError("all classes must be evaluated on the same m points");
    for (double v : c.data()) {
      if (std::abs(v) > A) {
        throw InvalidArgument("class value " + std::to_string(v) + " exceeds the bound A");
      }
    }
    K += c.cols();
  }
  Matrix pooled(m, K);
  double best_single = 0.0;
  std::size_t offset = 0;
  for (const Matrix& c : classes) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < c.cols(); ++k) pooled(i, offset + k) = c(i, k);
    }
    offset += c.cols();
    best_single = std::max(best_single, exact_rademacher(c).value);
  }
  InequalityCheck out;
  out.lhs = exact_rademacher(pooled).value;
  const double r = static_cast<double>(classes.size());
  out.rhs = best_single +
            2.0 * std::sqrt(2.0) * A * std::sqrt(std::log(r)) / std::sqrt(static_cast<double>(m));
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12) + 1e-15;
  return out;
}

}  // namespace capnet
