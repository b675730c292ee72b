#pragma once

// The capnet command line, callable in-process for tests.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace capnet::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kVerification = 3,
  kNumerical = 4,
};

// args excludes the program name. Primary output goes to `out` unless --out
// is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "inf" (any case) or a number.
double parse_exponent(const std::string& text);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// name: norms, contraction, union, cover, certificate, lowerbound or all.
std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed);

enum class SweepFamily { ultra_thin, random };

struct SweepOptions {
  std::vector<std::size_t> depths{1, 2, 4, 8, 16, 32, 64};
  SweepFamily family = SweepFamily::ultra_thin;
  std::size_t input_dim = 3;
  std::size_t width = 4;  // hidden width of the random family
  std::size_t m = 10;
  double gamma = 1.0;
  std::optional<double> Gamma;
  std::size_t samples = 50;  // 0 skips the Monte Carlo column
  std::size_t restarts = 4;
  std::size_t steps = 100;
  std::uint64_t seed = 42;
  std::optional<std::string> data_path;
};

struct SweepRow {
  std::size_t depth = 0;
  double ney15 = 0.0;
  double frobenius_sqrtd = 0.0;
  double frobenius_sqrtd_weak = 0.0;
  double depth_independent = 0.0;
  double Gamma = 0.0;
  bool first_branch_active = false;
  std::optional<double> mc_estimate;
  std::optional<double> mc_std_error;
};

std::vector<SweepRow> run_sweep(const SweepOptions& opts);
std::string render_sweep_csv(const std::vector<SweepRow>& rows);

// True unless rows with an active first branch and a common Gamma disagree
// on the depth-independent value by more than 1e-9 (relative).
bool sweep_is_flat(const std::vector<SweepRow>& rows);

}  // namespace capnet::cli
