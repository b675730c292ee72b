#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"

#include "capnet/bounds.hpp"
#include "capnet/error.hpp"

namespace capnet {

namespace {

constexpr const char* kConstantNote = "universal constant set to 1";

bool all_positive_homogeneous(const Network& net) {
  for (const Layer& l : net.layers()) {
    if (l.activation && !is_elementwise(*l.activation)) return false;
  }
  return true;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string p_string(double p) { return std::isinf(p) ? "inf" : format_double(p); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const BoundEntry* BoundReport::find(const std::string& name) const {
  for (const BoundEntry& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

BoundReport make_report(const Network& net, const Dataset& data, const ReportOptions& opts) {
  if (data.dim() != net.input_dim()) {
    throw ShapeError("dataset dimension " + std::to_string(data.dim()) +
                     " does not match network input_dim " + std::to_string(net.input_dim()));
  }
  if (!(opts.gamma > 0.0) || !std::isfinite(opts.gamma)) {
    throw InvalidArgument("gamma must be positive and finite");
  }
  if (opts.B && !(*opts.B >= 0.0 && std::isfinite(*opts.B))) {
    throw InvalidArgument("B override must be a finite non-negative number");
  }
  const NormProfile prof = profile(net, opts.p);

  BoundReport rep;
  BoundContext& ctx = rep.context;
  ctx.m = data.size();
  ctx.B = opts.B.value_or(data.radius);
  ctx.gamma = opts.gamma;
  ctx.p = opts.p;
  ctx.n = data.dim();
  ctx.h = net.width();
  ctx.d = net.depth();
  ctx.Gamma = opts.Gamma.value_or(prof.spectral_product);
  const double Mp = opts.M.value_or(prof.schatten_product);

  if (net.output_dim() != 1) {
    rep.warnings.push_back("network output is vector-valued (dim " +
                           std::to_string(net.output_dim()) +
                           "); the bounds are stated for scalar outputs");
  }
  if (prof.degenerate) rep.warnings.push_back("network has an identically zero layer");
  if (ctx.Gamma > Mp * (1.0 + 1e-12)) {
    rep.warnings.push_back("Gamma exceeds the Schatten-p norm product; log terms clamp to 1");
  }
  if (ctx.Gamma > prof.frobenius_product * (1.0 + 1e-12)) {
    rep.warnings.push_back("Gamma exceeds the Frobenius norm product; log terms clamp to 1");
  }

  const bool homogeneous = all_positive_homogeneous(net);
  const double B = ctx.B;
  const std::size_t m = ctx.m;

  std::ostringstream base;
  base << "d=" << ctx.d << " m=" << m << " B=" << format_double(B);
  const std::string digest_base = base.str();

  auto add = [&](std::string name, bool exact, std::string citation, std::string digest,
                 bool applicable, const std::function<double()>& eval) {
    BoundEntry e;
    e.name = std::move(name);
    e.exact_constants = exact;
    e.citation = std::move(citation);
    e.inputs_digest = digest_base + (digest.empty() ? "" : " " + digest);
    if (!exact) e.note = kConstantNote;
    if (!applicable) {
      e.note = "inapplicable: requires element-wise positive-homogeneous activations";
    } else {
      try {
        e.value = eval();
      } catch (const DegenerateLayer& err) {
        e.note = std::string("inapplicable: ") + err.what();
      }
    }
    rep.entries.push_back(std::move(e));
  };

  const std::string prodF = "prod_F=" + format_double(prof.frobenius_product);
  const std::string gam = "Gamma=" + format_double(ctx.Gamma);
  const std::string gmm = "gamma=" + format_double(ctx.gamma);

  add("bound_ney15", false, "Neyshabur, Tomioka, Srebro (2015)", prodF, homogeneous,
      [&] { return bound_ney15(prof, B, m); });
  add("bound_bartlett", false,
      "Bartlett, Foster, Telgarsky (2017); polylog factors in m and h not included",
      "Gamma_net=" + format_double(prof.spectral_product), true,
      [&] { return bound_bartlett(prof, B, m); });
  add("bartlett_intermediary", false,
      "Bartlett, Foster, Telgarsky (2017) with the ln(h) ln(m) factor",
      "h=" + std::to_string(ctx.h), true,
      [&] { return bound_bartlett_intermediary(prof, B, m, ctx.h); });
  add("bound_pacbayes", false, "Neyshabur, Bhojanapalli, Srebro (2018)",
      "h=" + std::to_string(ctx.h), homogeneous,
      [&] { return bound_pacbayes(prof, B, m, ctx.h); });
  add("bound_frobenius_sqrtd", true, "sqrt(d) Frobenius peeling bound, data-dependent form",
      prodF, homogeneous, [&] { return bound_frobenius_sqrtd(prof, data, B).value; });
  add("bound_frobenius_sqrtd_weak", true, "sqrt(d) Frobenius peeling bound, radius form",
      prodF, homogeneous, [&] { return bound_frobenius_sqrtd(prof, data, B).weak_form; });
  add("bound_l1inf_sqrtd", true, "(1,inf) peeling bound, data-dependent form",
      "prod_l1inf=" + format_double(prof.rows_l1_max_product) + " n=" + std::to_string(ctx.n),
      homogeneous, [&] { return bound_l1inf_sqrtd(prof, data, B).value; });
  add("bound_l1inf_sqrtd_weak", true, "(1,inf) peeling bound, radius form",
      "prod_l1inf=" + format_double(prof.rows_l1_max_product) + " n=" + std::to_string(ctx.n),
      homogeneous, [&] { return bound_l1inf_sqrtd(prof, data, B).weak_form; });
  add("bound_depth_independent_frobenius", false,
      "depth-independent Frobenius bound via depth reduction",
      prodF + " " + gam + " " + gmm, homogeneous, [&] {
        return bound_depth_independent_frobenius(prof, B, m, ctx.gamma, ctx.Gamma).value;
      });
  add("depth_reduction_frobenius_tuned", false,
      "depth-independent Frobenius bound, r tuned by exhaustive scan",
      prodF + " " + gam + " " + gmm, homogeneous, [&] {
        return bound_depth_independent_frobenius_tuned(prof, B, m, ctx.gamma, ctx.Gamma);
      });
  add("bound_depth_independent_spectral", false,
      "depth-independent spectral/Schatten bound via depth reduction",
      "p=" + p_string(ctx.p) + " M_p=" + format_double(Mp) + " " + gam + " " + gmm,
      homogeneous, [&] {
        return bound_depth_independent_spectral(prof, B, m, ctx.gamma, ctx.h, ctx.p, ctx.Gamma,
                                                Mp)
            .value;
      });
  add("bound_lipschitz_class", false, "covering bound for Lipschitz functions on the ball",
      "Gamma_net=" + format_double(prof.spectral_product) + " " + gmm, true,
      [&] { return bound_lipschitz_class(prof, B, m, ctx.gamma, ctx.n); });

  std::vector<double> budgets;
  if (opts.M) {
    budgets.push_back(*opts.M);
  } else {
    for (const LayerNorms& l : prof.layers) budgets.push_back(l.schatten_p);
  }
  add("bound_lower", false, "lower bound for Schatten-p constrained classes",
      "p=" + p_string(ctx.p) + " M_p=" + format_double(Mp) + " h=" + std::to_string(ctx.h) +
          " " + gmm,
      true, [&] { return bound_lower(budgets, B, m, ctx.gamma, ctx.h, ctx.p); });
  return rep;
}

std::string render_table(const BoundReport& report) {
  const BoundContext& c = report.context;
  std::ostringstream os;
  os << "capnet bound report\n";
  os << "context: m=" << c.m << " B=" << format_double(c.B) << " gamma=" << format_double(c.gamma)
     << " p=" << p_string(c.p) << " n=" << c.n << " h=" << c.h << " d=" << c.d
     << " Gamma=" << format_double(c.Gamma) << "\n";
  os << "defaults: p=2 gamma=1 seed=42\n\n";
  os << std::left << std::setw(36) << "name" << std::setw(26) << "exact constants"
     << std::setw(26) << "constant set to 1" << "citation\n";
  for (const BoundEntry& e : report.entries) {
    const std::string v = e.value ? format_double(*e.value) : "inapplicable";
    os << std::setw(36) << e.name << std::setw(26) << (e.exact_constants ? v : "-")
       << std::setw(26) << (e.exact_constants ? "-" : v) << e.citation << "\n";
  }
  for (const std::string& w : report.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string render_json(const BoundReport& report) {
  using nlohmann::ordered_json;
  const BoundContext& c = report.context;
  ordered_json j;
  ordered_json ctx;
  ctx["m"] = c.m;
  ctx["B"] = c.B;
  ctx["gamma"] = c.gamma;
  if (std::isinf(c.p)) {
    ctx["p"] = "inf";
  } else {
    ctx["p"] = c.p;
  }
  ctx["n"] = c.n;
  ctx["h"] = c.h;
  ctx["d"] = c.d;
  ctx["Gamma"] = c.Gamma;
  j["context"] = ctx;
  ordered_json entries = ordered_json::array();
  for (const BoundEntry& e : report.entries) {
    ordered_json je;
    je["name"] = e.name;
    if (e.value) {
      je["value"] = *e.value;
    } else {
      je["value"] = "inapplicable";
    }
    je["exact_constants"] = e.exact_constants;
    je["citation"] = e.citation;
    je["inputs_digest"] = e.inputs_digest;
    je["note"] = e.note;
    entries.push_back(je);
  }
  j["entries"] = entries;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string render_csv(const BoundReport& report) {
  std::ostringstream os;
  os << "name,value,exact_constants,citation\n";
  for (const BoundEntry& e : report.entries) {
    std::string cite = e.citation;
    if (!e.note.empty()) cite += "; " + e.note;
    os << csv_field(e.name) << ',' << (e.value ? format_double(*e.value) : "inapplicable") << ','
       << (e.exact_constants ? "true" : "false") << ',' << csv_field(cite) << "\n";
  }
  return os.str();
}

}  // namespace capnet
