#pragma once

// Closed-form capacity bounds for norm-constrained feedforward networks and
// the baselines they are compared against. Bounds stated only up to a
// universal constant are evaluated with that constant set to 1.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capnet/network.hpp"

namespace capnet {

// max(1, ln z)
double log_bar(double z);

// B 2^d prod ||W_j||_F / sqrt(m)
double bound_ney15(const NormProfile& prof, double B, std::size_t m);

// B prod ||W_j|| (sum_j (||W_j^T||_{2,1} / ||W_j||)^{2/3})^{3/2} / sqrt(m).
// Throws DegenerateLayer when a layer has zero spectral norm.
double bound_bartlett(const NormProfile& prof, double B, std::size_t m);

// Same as bound_bartlett with the ln(h) ln(m) factor of the intermediary
// statement restored (ln h clamped to 1 for h < 2).
double bound_bartlett_intermediary(const NormProfile& prof, double B, std::size_t m,
                                   std::size_t h);

// B prod ||W_j|| sqrt(d^2 h sum_j ||W_j||_F^2 / ||W_j||^2 / m)
double bound_pacbayes(const NormProfile& prof, double B, std::size_t m, std::size_t h);

struct PeelingBound {
  double value;      // data-dependent form
  double weak_form;  // form that only uses B = max ||x_i||
};

// (1/m) prod M_F(j) (sqrt(2 ln2 d) + 1) sqrt(sum_i ||x_i||^2); exact constants.
// The weak form uses B when given, the data radius otherwise.
PeelingBound bound_frobenius_sqrtd(const NormProfile& prof, const Dataset& data,
                                   std::optional<double> B = std::nullopt);

// (2/m) prod M(j) sqrt(d + 1 + ln n) sqrt(max_j sum_i x_ij^2); exact constants.
PeelingBound bound_l1inf_sqrtd(const NormProfile& prof, const Dataset& data,
                               std::optional<double> B = std::nullopt);

struct TunedDepth {
  std::size_t r_star = 1;      // minimizer of the inner scan
  double inner_min = 0.0;      // min_r c r^a / n + b / r^b
  double depth_branch = 0.0;   // d^a / n
  double value = 0.0;          // min(inner_min, depth_branch)
  bool depth_branch_wins = false;
  double lemma_rhs = 0.0;      // min(3 b^{a/(a+b)} / (n/c)^{b/(a+b)}, d^a / n)
};

// Exhaustive scan over r = 1..d. Domain: alpha > 0, beta in (0, 1],
// b, c, n >= 1, d >= 1; throws InvalidArgument otherwise.
TunedDepth tune_r(double alpha, double beta, double b, double c, double n, std::size_t d);

struct MinOfTwo {
  double value = 0.0;         // prefactor * min(first, second)
  double prefactor = 0.0;
  double first_branch = 0.0;  // depth-free branch (without prefactor)
  double second_branch = 0.0; // depth-dependent branch (without prefactor)
  bool first_branch_active = false;
  bool inconsistent = false;  // Gamma exceeded the norm product; log clamped
};

// (B prod M_F / gamma) min{ logbar^{3/4}(m) sqrt(logbar(prod M_F / Gamma)) /
// m^{1/4}, sqrt(d/m) }. Gamma defaults to the spectral-norm product.
MinOfTwo bound_depth_independent_frobenius(const NormProfile& prof, double B,
                                           std::size_t m, double gamma,
                                           std::optional<double> Gamma = std::nullopt);

// Same quantity realized through tune_r (alpha = beta = 1/2,
// b = sqrt(logbar(prod M_F / Gamma)), c = logbar^{3/2}(m), n = sqrt(m)).
double bound_depth_independent_frobenius_tuned(const NormProfile& prof, double B,
                                               std::size_t m, double gamma,
                                               std::optional<double> Gamma = std::nullopt);

// (B L ln h ln m prod M(j) / gamma) min{ logbar(prod M_p / Gamma)^{1/(2/3+p)}
// (logbar^{3/2} m)^{1/(1+3p/2)} / m^{1/(2+3p)}, d^{3/2} / sqrt(m) } with
// M(j) the spectral norms and L the largest (2,1)/spectral ratio.
MinOfTwo bound_depth_independent_spectral(const NormProfile& prof, double B,
                                          std::size_t m, double gamma, std::size_t h,
                                          double p,
                                          std::optional<double> Gamma = std::nullopt,
                                          std::optional<double> schatten_product = std::nullopt);

// Depth-reduction bracket with constant 1:
//   (B prod M / gamma) min_r { ln^{3/2}(m)/B max_{r'<=r} shallow[r'-1]
//                              + (ln(prod M_p / Gamma) / r)^{1/p}
//                              + (1 + sqrt(ln r)) / sqrt(m) }
// where shallow[r'-1] is the complexity of the depth-r' class divided by
// prod_{j<=r'} M(j).
struct DepthReduction {
  double value = 0.0;
  std::size_t r_star = 1;
};
DepthReduction depth_reduction_kernel(std::span<const double> shallow, double B,
                                      double spectral_budget_product, double gamma,
                                      std::size_t m, double Gamma,
                                      double schatten_budget_product, double p);

// B prod ||W_j|| / (gamma m^{1/dim})
double bound_lipschitz_class(const NormProfile& prof, double B, std::size_t m,
                             double gamma, std::size_t dim);

// B prod M_p(j) h^{max(0, 1/2 - 1/p)} / (gamma sqrt(m)); p = inf allowed.
double bound_lower(std::span<const double> budgets, double B, std::size_t m,
                   double gamma, std::size_t h, double p);

struct BoundContext {
  std::size_t m = 0;
  double B = 0.0;
  double gamma = 1.0;
  double p = 2.0;
  std::size_t n = 0;
  std::size_t h = 0;
  std::size_t d = 0;
  double Gamma = 0.0;
};

struct BoundEntry {
  std::string name;
  std::optional<double> value;  // empty when the bound does not apply
  bool exact_constants = false;
  std::string citation;
  std::string inputs_digest;
  std::string note;
};

struct BoundReport {
  BoundContext context;
  std::vector<BoundEntry> entries;
  std::vector<std::string> warnings;

  const BoundEntry* find(const std::string& name) const;
};

struct ReportOptions {
  double p = 2.0;
  double gamma = 1.0;
  std::optional<double> B;      // overrides the data radius
  std::optional<double> Gamma;  // overrides the spectral-norm product
  std::optional<double> M;      // overrides the Schatten-p product
};

BoundReport make_report(const Network& net, const Dataset& data, const ReportOptions& opts);

std::string render_table(const BoundReport& report);
std::string render_json(const BoundReport& report);
std::string render_csv(const BoundReport& report);

// Shared number formatting: 17 significant digits, round-trips exactly.
std::string format_double(double x);

}  // namespace capnet
