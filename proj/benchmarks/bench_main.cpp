#include <benchmark/benchmark.h>

#include "dsi/distance.hpp"
#include "dsi/measures.hpp"
#include "dsi/random.hpp"
#include "dsi/separability.hpp"
#include "dsi/synthetic.hpp"
#include "dsi/two_sample.hpp"

using namespace dsi;

namespace {

PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n * dim);
  for (auto& x : v) x = rng.uniform();
  return PointSet(dim, std::move(v));
}

Dataset cifar_like(std::size_t n) {
  Rng rng(1);
  std::vector<double> f(n * kCifarPixels);
  for (auto& v : f) v = static_cast<double>(rng.below(256));
  std::vector<Label> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<Label>(i % 10);
  return Dataset(kCifarPixels, std::move(f), std::move(l));
}

void BM_PairwiseCondensed(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto pts = random_points(n, dim, 3);
  const auto m = DistanceMetric::euclidean();
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_condensed(pts, m));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1) / 2));
}
BENCHMARK(BM_PairwiseCondensed)->Args({1000, 2})->Args({1000, 64})->Args({500, 3072});

void BM_KsStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> a(n), b(2 * n);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal(0.1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ks_statistic(a, b));
}
BENCHMARK(BM_KsStatistic)->Arg(1 << 12)->Arg(1 << 18);

void BM_DsiMoons(benchmark::State& state) {
  GeneratorSpec spec;
  spec.shape = Shape::Moons;
  spec.n_per_class = static_cast<std::size_t>(state.range(0));
  const auto ds = generate(spec);
  for (auto _ : state) benchmark::DoNotOptimize(compute_dsi(ds).dsi);
}
BENCHMARK(BM_DsiMoons)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DsiCifarShaped(benchmark::State& state) {
  const auto ds = cifar_like(static_cast<std::size_t>(state.range(0)));
  DsiOptions opt;
  opt.workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(compute_dsi(ds, {}, Divergence::KS, opt).dsi);
}
BENCHMARK(BM_DsiCifarShaped)->Args({1000, 1})->Args({1000, 8})->Unit(benchmark::kMillisecond);

void BM_Measures(benchmark::State& state) {
  GeneratorSpec spec;
  spec.shape = Shape::Blobs;
  spec.n_per_class = static_cast<std::size_t>(state.range(0));
  const auto ds = generate(spec);
  for (auto _ : state) benchmark::DoNotOptimize(compute_measures(ds, kAllMeasures));
}
BENCHMARK(BM_Measures)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
