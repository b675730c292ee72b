#pragma once

// The two constructions behind the lower bound for Schatten-p constrained
// classes, with exact Rademacher complexities:
//  * diagonal: x_i = B e_(i mod h), first layer diag(w) with ||w||_p <= M_p(1)
//    followed by max(.) and scalar layers M_p(2..d);
//  * scalar chain: networks over R whose complexity is driven by E|sum eps_i|.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "capnet/network.hpp"
#include "capnet/rademacher.hpp"

namespace capnet {

enum class EvalMode { enumerate, monte_carlo };

struct DiagConstruction {
  std::size_t h = 1;
  std::size_t m = 1;
  double p = 2.0;
  double B = 1.0;
  double gamma = 1.0;
  std::vector<double> budgets;  // M_p(1), ..., M_p(d)
  Dataset data;
  // buckets[k] = {i in 1..m : i mod h = k} (1-based sample indices)
  std::vector<std::vector<std::size_t>> buckets;
};

// budgets must be non-empty and positive; h, m >= 1; p in [1, 64] or inf.
DiagConstruction build_diag(std::size_t h, std::size_t m, double p, double B, double gamma,
                            std::vector<double> budgets);

// The class realized as a network template: an (h+1) x h diagonal first layer
// (the extra zero row makes max(.) return max(0, .)) with a Schatten-p ball of
// radius M_p(1), then fixed 1x1 layers M_p(2..d), output scaled by 1/gamma.
ClassSpec diag_class_spec(const DiagConstruction& c);

// ||(c)_+||_{p*} with 1/p + 1/p* = 1: the exact value of
// sup_{||w||_p <= 1} sum_k max(0, w_k) c_k.
double positive_part_dual_norm(std::span<const double> c, double p);

struct LowerBoundEstimate {
  RademacherEstimate estimate;  // exact dual-norm supremum
  double witness = 0.0;         // same with w_k = h^{-1/p} sign(c_k)
};

LowerBoundEstimate exact_diag_rademacher(const DiagConstruction& c, EvalMode mode,
                                         std::size_t samples = 0, std::uint64_t seed = 42);

struct ScalarChainConstruction {
  std::size_t m = 1;
  double B = 1.0;
  double gamma = 1.0;
  std::vector<double> budgets;  // M_p(1), ..., M_p(d)
};

// (B prod M_p / (gamma m)) E|sum_i eps_i|; enumeration groups the 2^m sign
// vectors by their number of minus signs.
RademacherEstimate exact_scalar_chain_rademacher(const ScalarChainConstruction& c,
                                                 EvalMode mode, std::size_t samples = 0,
                                                 std::uint64_t seed = 42);

struct LowerBoundRow {
  std::size_t h = 0;
  std::size_t m = 0;
  double p = 0.0;
  double diag = 0.0;
  double witness = 0.0;
  double scalar_chain = 0.0;
  double bound = 0.0;
  double ratio = 0.0;         // max(diag, scalar_chain) / bound
  double scalar_ratio = 0.0;  // scalar_chain / bound
};

// Unit budgets, B = gamma = 1, depth 2. Rows ordered by h, then m, then p.
std::vector<LowerBoundRow> demonstrate_lower_bound(const std::vector<std::size_t>& h_grid,
                                                   const std::vector<std::size_t>& m_grid,
                                                   const std::vector<double>& p_grid,
                                                   std::uint64_t seed,
                                                   EvalMode mode = EvalMode::enumerate,
                                                   std::size_t samples = 2000);

std::string render_lower_bound_csv(const std::vector<LowerBoundRow>& rows);

}  // namespace capnet
