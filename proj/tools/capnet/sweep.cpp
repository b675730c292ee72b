#include <cmath>
#include <sstream>

#include "cli.hpp"

#include "capnet/bounds.hpp"
#include "capnet/error.hpp"
#include "capnet/linalg.hpp"
#include "capnet/parallel.hpp"
#include "capnet/rademacher.hpp"
#include "capnet/random.hpp"

namespace capnet::cli {

namespace {

// x -> a_d relu(... a_2 relu(w^T x)) with ||w|| = 1 and unit scalars.
Network ultra_thin_chain(std::size_t depth, std::size_t n) {
  std::vector<Layer> layers;
  Vector w(n, 1.0 / std::sqrt(static_cast<double>(n)));
  layers.push_back(Layer{Matrix::row_vector(w), Activation::relu});
  for (std::size_t j = 1; j < depth; ++j) layers.push_back(Layer{Matrix{{1.0}}, Activation::relu});
  layers.back().activation.reset();
  return Network(std::move(layers));
}

// Random ReLU net with every layer rescaled to unit Frobenius norm.
Network unit_frobenius_net(std::size_t depth, std::size_t n, std::size_t width,
                           std::uint64_t seed) {
  std::vector<std::size_t> dims{n};
  for (std::size_t j = 1; j < depth; ++j) dims.push_back(width);
  dims.push_back(1);
  const Network raw = random_network(dims, Activation::relu, seed);
  Network net = raw;
  for (std::size_t j = 1; j <= depth; ++j) {
    Matrix w = raw.layer(j).weight;
    w *= 1.0 / norm2(w.data());
    net = net.with_weight(j, std::move(w));
  }
  return net;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepOptions& o) {
  if (o.depths.empty()) throw InvalidArgument("sweep needs at least one depth");
  const Dataset data = o.data_path ? load_dataset(*o.data_path)
                                   : random_sphere_dataset(o.m, o.input_dim, 1.0, o.seed);
  std::vector<SweepRow> rows;
  for (std::size_t d : o.depths) {
    if (d < 1) throw InvalidArgument("depths must be >= 1");
    const Network net = o.family == SweepFamily::ultra_thin
                            ? ultra_thin_chain(d, data.dim())
                            : unit_frobenius_net(d, data.dim(), o.width, derive_seed(o.seed, d));
    const NormProfile prof = profile(net, 2.0);
    const double B = data.radius;
    SweepRow row;
    row.depth = d;
    row.ney15 = bound_ney15(prof, B, data.size());
    const PeelingBound peel = bound_frobenius_sqrtd(prof, data);
    row.frobenius_sqrtd = peel.value;
    row.frobenius_sqrtd_weak = peel.weak_form;
    const MinOfTwo di = bound_depth_independent_frobenius(prof, B, data.size(), o.gamma, o.Gamma);
    row.depth_independent = di.value;
    row.first_branch_active = di.first_branch_active;
    row.Gamma = o.Gamma.value_or(prof.spectral_product);
    if (o.samples > 0) {
      std::vector<LayerSpec> specs;
      for (const LayerNorms& l : prof.layers) {
        specs.push_back(LayerSpec{{BallConstraint(NormKind::frobenius(), l.frobenius)},
                                  LayerStructure::dense});
      }
      const ClassSpec spec(net, std::move(specs), 1.0 / o.gamma);
      AscentOptions ao;
      ao.restarts = o.restarts;
      ao.steps = o.steps;
      const RademacherEstimate est = mc_rademacher(spec, data, o.samples, ao, o.seed);
      row.mc_estimate = est.value;
      row.mc_std_error = est.std_error;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "depth,bound_ney15,bound_frobenius_sqrtd,bound_frobenius_sqrtd_weak,"
        "bound_depth_independent_frobenius,first_branch_active,Gamma,mc_estimate,mc_std_error\n";
  for (const SweepRow& r : rows) {
    os << r.depth << ',' << format_double(r.ney15) << ',' << format_double(r.frobenius_sqrtd)
       << ',' << format_double(r.frobenius_sqrtd_weak) << ','
       << format_double(r.depth_independent) << ',' << (r.first_branch_active ? "true" : "false")
       << ',' << format_double(r.Gamma) << ','
       << (r.mc_estimate ? format_double(*r.mc_estimate) : "skipped") << ','
       << (r.mc_std_error ? format_double(*r.mc_std_error) : "skipped") << "\n";
  }
  return os.str();
}

bool sweep_is_flat(const std::vector<SweepRow>& rows) {
  const SweepRow* ref = nullptr;
  for (const SweepRow& r : rows) {
    if (!r.first_branch_active) continue;
    if (ref == nullptr) {
      ref = &r;
      continue;
    }
    if (std::abs(r.Gamma - ref->Gamma) > 1e-12 * ref->Gamma) continue;
    if (std::abs(r.depth_independent - ref->depth_independent) >
        1e-9 * std::max(1.0, std::abs(ref->depth_independent))) {
      return false;
    }
  }
  return true;
}

}  // namespace capnet::cli
