#include <benchmark/benchmark.h>

#include "stochq/modproj.hpp"

using namespace stochq;

namespace {

void BM_ProjectDirectPoisson(benchmark::State& state) {
  const auto spec = DistributionSpec::poisson(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(project_direct(spec, 4));
}
BENCHMARK(BM_ProjectDirectPoisson)->Arg(1)->Arg(16)->Arg(256);

void BM_ProjectDirectBinomial(benchmark::State& state) {
  const auto spec = DistributionSpec::binomial(static_cast<std::uint64_t>(state.range(0)), 1.0 / 6.0);
  for (auto _ : state) benchmark::DoNotOptimize(project_direct(spec, 4));
}
BENCHMARK(BM_ProjectDirectBinomial)->Arg(12)->Arg(96)->Arg(4096);

void BM_ProjectCf(benchmark::State& state) {
  const auto spec = DistributionSpec::negative_binomial(4, 1.0 / 6.0);
  const auto m = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(project_cf(spec, m));
}
BENCHMARK(BM_ProjectCf)->Arg(4)->Arg(64)->Arg(1024);

void BM_TurngAdvise(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(turng_advise(ScaleFamily{Family::Poisson}, 4, 1e-6));
}
BENCHMARK(BM_TurngAdvise);

}  // namespace
