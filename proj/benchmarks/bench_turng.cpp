#include <benchmark/benchmark.h>

#include "stochq/turng.hpp"

using namespace stochq;
using namespace stochq::turng;

namespace {

void BM_Xoshiro(benchmark::State& state) {
  Xoshiro256pp rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Xoshiro);

void BM_Generate(benchmark::State& state, DistributionSpec spec) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec, 4, count, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Generate, poisson8, DistributionSpec::poisson(8.0))->Arg(1 << 16);
BENCHMARK_CAPTURE(BM_Generate, binomial96, DistributionSpec::binomial(96, 1.0 / 6.0))->Arg(1 << 16);
BENCHMARK_CAPTURE(BM_Generate, nb4, DistributionSpec::negative_binomial(4, 1.0 / 6.0))->Arg(1 << 16);
BENCHMARK_CAPTURE(BM_Generate, hypergeometric, DistributionSpec::hypergeometric(200, 70, 40))->Arg(1 << 16);

void BM_Certify(benchmark::State& state) {
  const auto spec = DistributionSpec::poisson(8.0);
  for (auto _ : state) benchmark::DoNotOptimize(certify(spec, 4, 1000000, 1, 0.001));
}
BENCHMARK(BM_Certify)->Unit(benchmark::kMillisecond);

}  // namespace
