// Parallel kernels against the serial reference implementations.

#include "srtd/reference.hpp"
#include "srtd/t_algebra.hpp"
#include "srtd/transforms.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace srtd;

Tensor3 random_tensor(Dims d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Tensor3 t(d);
  for (double& v : t.data()) v = normal(gen);
  return t;
}

Dims cube(const benchmark::State& state) {
  return {std::size_t(state.range(0)), std::size_t(state.range(0)), std::size_t(state.range(1))};
}

template <Tensor3 (*F)(const Tensor3&)>
void unary(benchmark::State& state) {
  const Tensor3 a = random_tensor(cube(state), 1);
  for (auto _ : state) benchmark::DoNotOptimize(F(a));
  state.SetItemsProcessed(state.iterations() * std::int64_t(a.size()));
}

template <SpectralTensor3 (*F)(const Tensor3&)>
void spectral(benchmark::State& state) {
  const Tensor3 a = random_tensor(cube(state), 1);
  for (auto _ : state) benchmark::DoNotOptimize(F(a));
  state.SetItemsProcessed(state.iterations() * std::int64_t(a.size()));
}

template <Tensor3 (*F)(const Tensor3&, const Tensor3&)>
void binary(benchmark::State& state) {
  const Tensor3 a = random_tensor(cube(state), 1);
  const Tensor3 b = random_tensor(cube(state), 2);
  for (auto _ : state) benchmark::DoNotOptimize(F(a, b));
}

template <Tensor3 (*F)(const Tensor3&, double)>
void threshold(benchmark::State& state) {
  const Tensor3 a = random_tensor(cube(state), 1);
  for (auto _ : state) benchmark::DoNotOptimize(F(a, 1.0));
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({32, 8})->Args({64, 16})->Args({128, 32})->Unit(benchmark::kMillisecond);
}

} // namespace

BENCHMARK(unary<srtd::dct3>)->Name("dct3/parallel")->Apply(shapes);
BENCHMARK(unary<srtd::reference::dct3>)->Name("dct3/reference")->Apply(shapes);
BENCHMARK(spectral<srtd::dft_mode3>)->Name("dft_mode3/parallel")->Apply(shapes);
BENCHMARK(spectral<srtd::reference::dft_mode3>)->Name("dft_mode3/reference")->Apply(shapes);
BENCHMARK(binary<srtd::tproduct>)->Name("tproduct/parallel")->Apply(shapes);
BENCHMARK(binary<srtd::reference::tproduct>)->Name("tproduct/reference")->Apply(shapes);
BENCHMARK(threshold<static_cast<Tensor3 (*)(const Tensor3&, double)>(srtd::svt)>)->Name("svt/parallel")->Apply(shapes);
BENCHMARK(threshold<srtd::reference::svt>)->Name("svt/reference")->Apply(shapes);
BENCHMARK_MAIN();
