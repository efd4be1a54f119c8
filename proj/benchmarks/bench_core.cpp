#include <benchmark/benchmark.h>

#include "paleyscope/corpus.hpp"
#include "paleyscope/maximal.hpp"
#include "paleyscope/spde.hpp"
#include "paleyscope/squarefn.hpp"

using namespace paleyscope;

namespace {

Symbol heat() { return FractionalSymbol(2.0, TimeCoefficient::constant(1.0), 0.5); }

SpaceTimeField corpus_field(int n, int nt) {
  CorpusSpec spec;
  spec.count = 1;
  return make_corpus(spec, 1, 0.0, 0.01, nt)[0].sample(SpaceGrid(1, n, spec.L), 0.0, 0.01, nt);
}

}  // namespace

static void BM_ForwardTransform(benchmark::State& state) {
  const SpaceGrid g(static_cast<int>(state.range(1)), static_cast<int>(state.range(0)), 24.0);
  auto f = Field::zeros(g, 1);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = Complex(0.001 * i, 1.0);
  for (auto _ : state) {
    forward_transform(g, f.values);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_ForwardTransform)->Args({128, 1})->Args({4096, 1})->Args({64, 2})->Args({256, 2});

static void BM_SquareFunction(benchmark::State& state) {
  const auto f = corpus_field(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto sym = heat();
  for (auto _ : state) benchmark::DoNotOptimize(square_function(sym, 1.0, f));
}
BENCHMARK(BM_SquareFunction)->Args({64, 64})->Args({128, 128})->Unit(benchmark::kMillisecond);

static void BM_SharpFunction(benchmark::State& state) {
  const auto G = square_function(heat(), 1.0, corpus_field(static_cast<int>(state.range(0)), 128));
  for (auto _ : state) benchmark::DoNotOptimize(sharp_function(G, 0.5));
}
BENCHMARK(BM_SharpFunction)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_MaximalSpace(benchmark::State& state) {
  const SpaceGrid g(1, static_cast<int>(state.range(0)), 24.0);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = (i * 2654435761u % 1000) * 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(maximal_space(g, f));
}
BENCHMARK(BM_MaximalSpace)->Arg(128)->Arg(1024);

static void BM_StochasticConvolution(benchmark::State& state) {
  NoiseSpec spec;
  spec.K = 1;
  spec.nt = 128;
  const auto f = corpus_field(128, spec.nt);
  std::uint64_t path = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stochastic_convolution(heat(), f, spec, path++));
}
BENCHMARK(BM_StochasticConvolution)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
