#pragma once

// Empirical Rademacher complexity
//   R_m(H) = E_eps sup_{h in H} (1/m) sum_i eps_i h(x_i)
// computed exactly for finite classes and small m, or by Monte Carlo over
// eps with a projected-gradient inner supremum for norm-constrained
// network classes. Also hosts the enumeration harnesses for the contraction
// inequalities and the union bound.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "capnet/linalg.hpp"
#include "capnet/network.hpp"

namespace capnet {

inline constexpr std::size_t kMaxExactSamples = 22;

using SignVector = std::vector<int>;

// Throws InvalidArgument unless every entry is +1 or -1.
void validate_signs(const SignVector& eps);

// Sign pattern for the bits of `code`: bit i set -> eps_i = -1.
SignVector signs_from_bits(std::uint64_t code, std::size_t m);

enum class EstimateMethod { exact_enumeration, monte_carlo };
std::string to_string(EstimateMethod m);

struct RademacherEstimate {
  double value = 0.0;
  EstimateMethod method = EstimateMethod::exact_enumeration;
  std::size_t epsilon_samples = 0;  // 2^m for enumeration
  std::size_t sup_restarts = 0;
  std::size_t sup_steps = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

// values(i, k) = h_k(x_i). Exact average over all 2^m sign vectors; m <= 22.
RademacherEstimate exact_rademacher(const Matrix& values);

enum class LayerStructure {
  dense,
  diagonal,  // only entries (i, i) are free, the rest stay zero
  fixed,     // weight frozen at the template value
};

struct LayerSpec {
  std::vector<BallConstraint> constraints;  // all enforced simultaneously
  LayerStructure structure = LayerStructure::dense;
};

struct ClassSpec {
  Network templ;  // shapes, activations, and the values of fixed layers
  std::vector<LayerSpec> layers;
  double output_scale = 1.0;  // e.g. 1/gamma for the loss z -> z/gamma

  ClassSpec(Network templ, std::vector<LayerSpec> layers, double output_scale = 1.0);
};

// Feasible point of layer j (0-based) closest to w: exact Euclidean projection
// for a single constraint, Dykstra's alternating projections for several,
// followed by a radial rescale so every constraint holds.
Matrix project_layer(const Matrix& w, const LayerSpec& spec);

struct AscentOptions {
  std::size_t restarts = 8;
  std::size_t steps = 500;
  double step = 0.1;  // eta_t = step * radius / sqrt(t)
};

struct AscentResult {
  double value = 0.0;
  std::vector<Matrix> weights;  // empty when the zero network was best
};

// Projected gradient ascent on (scale/m) sum_i eps_i N_W(x_i). The returned
// value is attained by feasible weights, so it never exceeds the true sup.
// Restart 0 starts from the projected data correlation, restart 1 from its
// sign flip in the last layer, the rest from random points.
AscentResult sup_ascent(const SignVector& eps, const ClassSpec& spec, const Dataset& data,
                        const AscentOptions& opts, std::uint64_t seed);

// Mean of sup_ascent over independent sign vectors; lower-biased.
RademacherEstimate mc_rademacher(const ClassSpec& spec, const Dataset& data,
                                 std::size_t epsilon_samples, const AscentOptions& opts,
                                 std::uint64_t seed);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

inline constexpr std::size_t kMaxContractionSamples = 14;

// F_values[k] is the m x q matrix of f_k(x_i). g(z) = exp(lambda z).
//   lhs = E_eps sup_{f, ||w|| = R} g(|sum_i eps_i sigma(w^T f(x_i))|)   (sampled)
//   rhs = 2 E_eps sup_f g(R ||sum_i eps_i f(x_i)||)                    (exact)
// sigma must be element-wise. The candidate directions include the rhs
// maximizers, so both sides are evaluated on a shared pool.
InequalityCheck check_contraction_frobenius(const std::vector<Matrix>& F_values, double R,
                                            double lambda, Activation sigma,
                                            std::size_t direction_samples, std::uint64_t seed);

// Same with ||.||_inf and w in the l1 ball of radius R (vertices +-R e_j plus
// sampled interior points).
InequalityCheck check_contraction_l1inf(const std::vector<Matrix>& F_values, double R,
                                        double lambda, Activation sigma,
                                        std::size_t interior_samples, std::uint64_t seed);

// lhs = R_m(union of classes), rhs = max_j R_m(class j) + 2 sqrt(2) A sqrt(ln r)/sqrt(m).
// Every class is an m x K_j evaluation matrix with entries bounded by A.
InequalityCheck check_union_bound(const std::vector<Matrix>& classes, double A);

}  // namespace capnet
