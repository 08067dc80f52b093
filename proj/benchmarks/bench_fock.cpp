#include <benchmark/benchmark.h>

#include "stochq/fock.hpp"
#include "stochq/turng.hpp"

using namespace stochq;
using namespace stochq::fock;
using stochq::turng::Xoshiro256pp;

namespace {

HermitianOperator random_hermitian(std::size_t d, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  }
  return HermitianOperator((a + a.adjoint()) / 2.0);
}

void BM_HermitianEigen(benchmark::State& state) {
  const auto h = random_hermitian(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigen(h));
}
BENCHMARK(BM_HermitianEigen)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMillisecond);

void BM_MatrixExponential(benchmark::State& state) {
  const auto h = random_hermitian(static_cast<std::size_t>(state.range(0)), 11);
  const Matrix a = Complex(0.0, -1.0) * h.matrix();
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exponential(a, 0.5));
}
BENCHMARK(BM_MatrixExponential)->RangeMultiplier(2)->Range(8, 128)->Unit(benchmark::kMillisecond);

void BM_CoherentState(benchmark::State& state) {
  const FockConfig cfg{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(coherent_state(cfg, Complex(2.0, 0.0)));
}
BENCHMARK(BM_CoherentState)->Arg(32)->Arg(128)->Arg(512);

void BM_Displacement(benchmark::State& state) {
  const FockConfig cfg{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(displacement(cfg, Complex(1.0, 0.5)));
}
BENCHMARK(BM_Displacement)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
