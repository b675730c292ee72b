#include <benchmark/benchmark.h>

#include <random>

#include "capnet/linalg.hpp"
#include "capnet/rademacher.hpp"
#include "capnet/random.hpp"

namespace {

void BM_Svd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const capnet::Matrix w = capnet::random_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(capnet::svd(w));
}
BENCHMARK(BM_Svd)->Arg(4)->Arg(16)->Arg(64);

void BM_ExactRademacher(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  const capnet::Matrix values = capnet::random_matrix(m, 8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(capnet::exact_rademacher(values));
}
BENCHMARK(BM_ExactRademacher)->Arg(10)->Arg(16)->Arg(20);

void BM_SupAscent(benchmark::State& state) {
  const capnet::Network net = capnet::random_network({3, 4, 4, 1}, capnet::Activation::relu, 3);
  std::vector<capnet::LayerSpec> specs;
  for (const capnet::Layer& l : net.layers()) {
    specs.push_back(capnet::LayerSpec{
        {capnet::BallConstraint(capnet::NormKind::frobenius(),
                                capnet::matrix_norm(l.weight, capnet::NormKind::frobenius()))}});
  }
  const capnet::ClassSpec spec(net, std::move(specs));
  const capnet::Dataset data = capnet::random_sphere_dataset(10, 3, 1.0, 4);
  const capnet::SignVector eps = capnet::signs_from_bits(0x2a5, 10);
  capnet::AscentOptions opts;
  opts.steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(capnet::sup_ascent(eps, spec, data, opts, 5));
}
BENCHMARK(BM_SupAscent)->Arg(100)->Arg(500);

}  // namespace
BENCHMARK_MAIN();
