#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "capnet/bounds.hpp"
#include "capnet/compress.hpp"
#include "capnet/error.hpp"
#include "capnet/linalg.hpp"
#include "capnet/lowerbound.hpp"
#include "capnet/network.hpp"
#include "capnet/rademacher.hpp"

namespace capnet::cli {

namespace {

// Thrown when a command ran but its built-in check failed.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string network;
  std::string data;
  std::string p = "2";
  double gamma = 1.0;
  std::uint64_t seed = 42;
  std::string format = "table";
  std::string out;
  std::optional<double> gamma_cap;
  std::optional<double> override_Gamma;
  std::optional<double> override_M;
  std::optional<double> override_B;
};

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write output file '" + c.out + "'");
  f << text;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  if (parts.empty()) throw InvalidArgument("empty list '" + s + "'");
  return parts;
}

std::vector<std::size_t> parse_counts(const std::string& s) {
  std::vector<std::size_t> v;
  for (const std::string& x : split(s)) {
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
      n = std::stoull(x, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != x.size() || n == 0) throw InvalidArgument("expected a positive integer, got '" + x + "'");
    v.push_back(static_cast<std::size_t>(n));
  }
  return v;
}

void check_format(const std::string& f) {
  if (f != "table" && f != "structured" && f != "csv") {
    throw InvalidArgument("--format must be table, structured or csv");
  }
}

void add_common(CLI::App* app, Common& c, bool needs_network) {
  auto* net = app->add_option("--network", c.network, "network file (JSON)");
  if (needs_network) net->required();
  app->add_option("--data", c.data, "dataset file (JSON)");
  app->add_option("--p", c.p, "Schatten exponent in [1, 64] or inf (default 2)");
  app->add_option("--gamma", c.gamma, "margin gamma (default 1)");
  app->add_option("--seed", c.seed, "random seed (default 42)");
  app->add_option("--format", c.format, "table | structured | csv");
  app->add_option("--out", c.out, "write the primary output to this file");
  app->add_option("--gamma-cap", c.gamma_cap, "use min(Gamma, cap) as the lower bound Gamma");
  app->add_option("--override-Gamma", c.override_Gamma, "lower bound on the spectral product");
  app->add_option("--override-M", c.override_M, "upper bound on the Schatten-p product");
  app->add_option("--override-B", c.override_B, "input radius B");
}

std::optional<double> effective_Gamma(const Common& c, double net_product) {
  std::optional<double> G = c.override_Gamma;
  if (c.gamma_cap) G = std::min(G.value_or(net_product), *c.gamma_cap);
  return G;
}

// ---------------------------------------------------------------- report

int cmd_report(const Common& c, std::ostream& out) {
  check_format(c.format);
  if (c.data.empty()) throw InvalidArgument("report needs --data");
  const Network net = load_network(c.network);
  const Dataset data = load_dataset(c.data);
  ReportOptions opts;
  opts.p = parse_exponent(c.p);
  opts.gamma = c.gamma;
  opts.B = c.override_B;
  opts.M = c.override_M;
  opts.Gamma = effective_Gamma(c, profile(net, opts.p).spectral_product);
  const BoundReport rep = make_report(net, data, opts);
  if (c.format == "csv") {
    emit(c, render_csv(rep), out);
  } else if (c.format == "structured") {
    emit(c, render_json(rep), out);
  } else {
    emit(c, render_table(rep), out);
  }
  return kOk;
}

// ---------------------------------------------------------------- compress

int cmd_compress(const Common& c, std::size_t r, std::size_t samples, std::ostream& out) {
  check_format(c.format);
  const Network net = load_network(c.network);
  double B = 1.0;
  if (c.override_B) {
    B = *c.override_B;
  } else if (!c.data.empty()) {
    B = load_dataset(c.data).radius;
  }
  const double p = parse_exponent(c.p);
  CompressionOptions opts;
  opts.M = c.override_M;
  double spectral_product = 1.0;
  for (const Layer& l : net.layers()) spectral_product *= matrix_norm(l.weight, NormKind::spectral());
  opts.Gamma = effective_Gamma(c, spectral_product);
  const CompressionResult res = rank1_replace(net, p, r, B, opts);
  const CertificateCheck check = verify_certificate(net, res.compressed, res.cert, B, samples, c.seed);

  if (!c.out.empty()) {
    save_network(res.compressed, c.out);
    std::ofstream f(c.out + ".certificate.json", std::ios::binary);
    if (!f) throw InvalidArgument("cannot write certificate next to '" + c.out + "'");
    f << serialize_certificate(res.cert);
  }
  const CompressionCertificate& k = res.cert;
  std::ostringstream os;
  if (c.format == "csv") {
    os << "r_requested,r_prime,p,Gamma,M,B,lemma_bound,theorem_bound,degenerate_zero,"
          "max_observed_deviation,within_lemma,within_theorem\n";
    os << k.r_requested << ',' << k.r_prime << ',' << format_double(k.p) << ','
       << format_double(k.Gamma) << ',' << format_double(k.M) << ',' << format_double(k.B) << ','
       << format_double(k.lemma_bound) << ',' << format_double(k.theorem_bound) << ','
       << (k.degenerate_zero ? "true" : "false") << ',' << format_double(check.max_deviation)
       << ',' << (check.within_lemma ? "true" : "false") << ','
       << (check.within_theorem ? "true" : "false") << "\n";
  } else if (c.format == "structured") {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(serialize_certificate(k));
    j["samples"] = samples;
    j["seed"] = c.seed;
    j["max_observed_deviation"] = check.max_deviation;
    j["within_lemma"] = check.within_lemma;
    j["within_theorem"] = check.within_theorem;
    os << j.dump(2) << "\n";
  } else {
    os << "rank-1 replacement certificate\n"
       << "requested r:            " << k.r_requested << "\n"
       << "replaced layer r':      " << k.r_prime << "\n"
       << "p:                      " << format_double(k.p) << "\n"
       << "Gamma / M:              " << format_double(k.Gamma) << " / " << format_double(k.M) << "\n"
       << "B:                      " << format_double(k.B) << "\n"
       << "zero-layer fallback:    " << (k.degenerate_zero ? "yes" : "no") << "\n"
       << "perturbation bound:     " << format_double(k.lemma_bound) << "\n"
       << "rank-1 theorem bound:   " << format_double(k.theorem_bound) << "\n"
       << "max observed deviation: " << format_double(check.max_deviation) << " over "
       << samples << " samples, seed " << c.seed << "\n";
  }
  // With --out the files hold the results; the summary still goes to stdout.
  out << os.str();
  if (!check.within_lemma || !check.within_theorem) {
    throw VerificationFailure("observed deviation exceeds the certificate");
  }
  return kOk;
}

// ---------------------------------------------------------------- rademacher

int cmd_rademacher(const Common& c, const std::string& norm, std::size_t samples,
                   std::size_t restarts, std::size_t steps, std::ostream& out) {
  check_format(c.format);
  if (c.data.empty()) throw InvalidArgument("rademacher needs --data");
  const Network net = load_network(c.network);
  const Dataset data = load_dataset(c.data);
  const NormKind kind = parse_norm_kind(norm);
  std::vector<LayerSpec> specs;
  std::vector<double> radii;
  for (std::size_t j = 1; j <= net.depth(); ++j) {
    const double r = matrix_norm(net.layer(j).weight, kind);
    if (r == 0.0) throw DegenerateLayer("layer " + std::to_string(j) + " has zero norm");
    radii.push_back(r);
    specs.push_back(LayerSpec{{BallConstraint(kind, r)}, LayerStructure::dense});
  }
  const ClassSpec spec(net, std::move(specs), 1.0 / c.gamma);
  AscentOptions opts;
  opts.restarts = restarts;
  opts.steps = steps;
  const RademacherEstimate est = mc_rademacher(spec, data, samples, opts, c.seed);

  std::ostringstream os;
  if (c.format == "csv") {
    os << "method,value,std_error,epsilon_samples,sup_restarts,sup_steps,seed,norm\n"
       << to_string(est.method) << ',' << format_double(est.value) << ','
       << format_double(est.std_error) << ',' << est.epsilon_samples << ',' << est.sup_restarts
       << ',' << est.sup_steps << ',' << est.seed << ',' << kind.name() << "\n";
  } else if (c.format == "structured") {
    nlohmann::ordered_json j;
    j["method"] = to_string(est.method);
    j["value"] = est.value;
    j["std_error"] = est.std_error;
    j["epsilon_samples"] = est.epsilon_samples;
    j["sup_restarts"] = est.sup_restarts;
    j["sup_steps"] = est.sup_steps;
    j["seed"] = est.seed;
    j["norm"] = kind.name();
    j["layer_radii"] = radii;
    os << j.dump(2) << "\n";
  } else {
    os << "empirical Rademacher complexity (lower-biased Monte Carlo estimate)\n"
       << "class: per-layer " << kind.name() << " balls at the network's own norms, gamma "
       << format_double(c.gamma) << "\n"
       << "value:     " << format_double(est.value) << "\n"
       << "std error: " << format_double(est.std_error) << "\n"
       << "samples " << est.epsilon_samples << ", restarts " << est.sup_restarts << ", steps "
       << est.sup_steps << ", seed " << est.seed << "\n";
  }
  emit(c, os.str(), out);
  return kOk;
}

// ---------------------------------------------------------------- lowerbound

int cmd_lowerbound(const Common& c, const std::string& hs, const std::string& ms,
                   const std::string& ps, std::size_t samples, std::ostream& out) {
  const std::vector<std::size_t> h = parse_counts(hs);
  const std::vector<std::size_t> m = parse_counts(ms);
  std::vector<double> p;
  for (const std::string& x : split(ps)) p.push_back(parse_exponent(x));
  const bool small = *std::max_element(m.begin(), m.end()) <= kMaxExactSamples;
  const auto rows = demonstrate_lower_bound(h, m, p, c.seed,
                                            small ? EvalMode::enumerate : EvalMode::monte_carlo,
                                            samples);
  emit(c, render_lower_bound_csv(rows), out);
  for (const LowerBoundRow& r : rows) {
    if (r.ratio < 0.2 || r.ratio > 2.0) {
      throw VerificationFailure("ratio " + format_double(r.ratio) + " at h=" +
                                std::to_string(r.h) + " m=" + std::to_string(r.m) +
                                " lies outside [0.2, 2.0]");
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Common& c, const std::string& depths, const std::string& family,
              std::size_t n, std::size_t width, std::size_t m, std::size_t samples,
              std::size_t restarts, std::size_t steps, std::ostream& out) {
  SweepOptions o;
  o.depths = parse_counts(depths);
  if (family == "ultra-thin") {
    o.family = SweepFamily::ultra_thin;
  } else if (family == "random") {
    o.family = SweepFamily::random;
  } else {
    throw InvalidArgument("--family must be ultra-thin or random");
  }
  o.input_dim = n;
  o.width = width;
  o.m = m;
  o.gamma = c.gamma;
  o.Gamma = c.override_Gamma;
  o.samples = samples;
  o.restarts = restarts;
  o.steps = steps;
  o.seed = c.seed;
  if (!c.data.empty()) o.data_path = c.data;
  const auto rows = run_sweep(o);
  emit(c, render_sweep_csv(rows), out);
  if (!sweep_is_flat(rows)) {
    throw VerificationFailure("depth-independent bound varies across depths with the first branch active");
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Common& c, const std::string& suite, std::ostream& out) {
  const auto results = run_suites(suite, c.seed);
  std::ostringstream os;
  bool ok = true;
  for (const SuiteResult& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  emit(c, os.str(), out);
  if (!ok) throw VerificationFailure("verification suite failed");
  return kOk;
}

}  // namespace

double parse_exponent(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != t.size() || !std::isfinite(v)) {
    throw InvalidArgument("expected a number or inf, got '" + text + "'");
  }
  if (v < 1.0 || v > NormKind::kMaxSchattenP) {
    throw InvalidArgument("Schatten exponent must lie in [1, 64] or be inf (use inf for the spectral norm)");
  }
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"capnet: norm-based capacity bounds, rank-1 compression and Rademacher estimates"};
  app.require_subcommand(1);
  Common c;

  auto* report = app.add_subcommand("report", "evaluate every bound for a network and dataset");
  add_common(report, c, true);

  std::size_t r = 0;
  std::size_t cert_samples = 1000;
  auto* compress = app.add_subcommand("compress", "rank-1 replacement with certificate");
  add_common(compress, c, true);
  compress->add_option("--r", r, "depth budget r (1..d)")->required();
  compress->add_option("--samples", cert_samples, "sphere samples for verification");

  std::string norm = "frobenius";
  std::size_t samples = 100;
  std::size_t restarts = 8;
  std::size_t steps = 500;
  auto* rad = app.add_subcommand("rademacher", "Monte Carlo Rademacher estimate");
  add_common(rad, c, true);
  rad->add_option("--norm", norm, "per-layer constraint: frobenius, spectral, schatten:<p>, rows-l2-sum, rows-l1-max");
  rad->add_option("--samples", samples, "sign-vector samples");
  rad->add_option("--restarts", restarts, "ascent restarts");
  rad->add_option("--steps", steps, "ascent steps");

  std::string hs = "2,4,8";
  std::string ms = "8,16";
  std::string ps = "1,2,inf";
  std::size_t lb_samples = 2000;
  auto* lb = app.add_subcommand("lowerbound", "lower-bound constructions vs the closed form (CSV)");
  add_common(lb, c, false);
  lb->add_option("--h-grid", hs, "comma-separated widths");
  lb->add_option("--m-grid", ms, "comma-separated sample counts");
  lb->add_option("--p-grid", ps, "comma-separated exponents");
  lb->add_option("--samples", lb_samples, "Monte Carlo samples when m > 22");

  std::string depths = "1,2,4,8,16,32,64";
  std::string family = "ultra-thin";
  std::size_t n = 3;
  std::size_t width = 4;
  std::size_t m = 10;
  std::size_t sweep_samples = 50;
  std::size_t sweep_restarts = 4;
  std::size_t sweep_steps = 100;
  auto* sweep = app.add_subcommand("sweep", "bounds and estimates across depths (CSV)");
  add_common(sweep, c, false);
  sweep->add_option("--depths", depths, "comma-separated depths");
  sweep->add_option("--family", family, "ultra-thin | random");
  sweep->add_option("--n", n, "input dimension");
  sweep->add_option("--width", width, "hidden width (random family)");
  sweep->add_option("--m", m, "synthetic sample count");
  sweep->add_option("--samples", sweep_samples, "Monte Carlo sign samples (0 = skip)");
  sweep->add_option("--restarts", sweep_restarts, "ascent restarts");
  sweep->add_option("--steps", sweep_steps, "ascent steps");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run property suites");
  add_common(verify, c, false);
  verify->add_option("--suite", suite, "norms | contraction | union | cover | certificate | lowerbound | all");

  std::vector<std::string> argv_store{"capnet"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*report) return cmd_report(c, out);
    if (*compress) return cmd_compress(c, r, cert_samples, out);
    if (*rad) return cmd_rademacher(c, norm, samples, restarts, steps, out);
    if (*lb) return cmd_lowerbound(c, hs, ms, ps, lb_samples, out);
    if (*sweep) return cmd_sweep(c, depths, family, n, width, m, sweep_samples, sweep_restarts, sweep_steps, out);
    if (*verify) return cmd_verify(c, suite, out);
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerification;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ShapeError& e) {
    err << "shape error: " << e.what() << "\n";
    return kParse;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DegenerateLayer& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace capnet::cli
