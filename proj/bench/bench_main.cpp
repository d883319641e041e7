// Copyright 2026 The wrdyn Authors
// SPDX-License-Identifier: Apache-2.0

// Serial vs parallel timings for the two hot loops: periodic convolution and replica ensembles.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "wrdyn/convolution.hpp"
#include "wrdyn/particles.hpp"

using namespace wrdyn;

namespace {

Field bumpy(const GridSpec& g) {
  Field f(g, 1.0);
  for (std::size_t j = 0; j < g.cells(); ++j) {
    const auto [i0, i1] = g.unflatten(j);
    f[j] += 0.5 * std::sin(2.0 * std::numbers::pi * (g.coordinate(0, i0) + 0.3 * g.coordinate(1, i1)) / g.box_length[0]);
  }
  return f;
}

const KernelSpec kKernel = make_kernel(KernelFamily::gaussian, 0.4, 1.0);

void BM_ConvolveSerial(benchmark::State& state) {
  const auto g = make_grid(2, 20.0, static_cast<int>(state.range(0)));
  const Field f = bumpy(g);
  for (auto _ : state) benchmark::DoNotOptimize(reference::periodic_convolve_serial(f, kKernel));
}

void BM_ConvolveDirect(benchmark::State& state) {
  const auto g = make_grid(2, 20.0, static_cast<int>(state.range(0)));
  const Field f = bumpy(g);
  const PeriodicConvolver conv(g, kKernel, ConvolutionMethod::direct);
  for (auto _ : state) benchmark::DoNotOptimize(conv.apply(f));
}

void BM_ConvolveSpectral(benchmark::State& state) {
  const auto g = make_grid(2, 20.0, static_cast<int>(state.range(0)));
  const Field f = bumpy(g);
  const PeriodicConvolver conv(g, kKernel, ConvolutionMethod::spectral);
  for (auto _ : state) benchmark::DoNotOptimize(conv.apply(f));
}

ModelParams repulsive() {
  const auto a0 = make_kernel(KernelFamily::tophat, 0.5, 1.0);
  const auto a1 = make_kernel(KernelFamily::exponential, 1.0, 0.5);
  return make_model(1, a0, a1, make_kernel(KernelFamily::gaussian, 1.2, 0.4), make_kernel(KernelFamily::tophat, 0.7, 0.6));
}

const ConfigFactory kInit = [](RandomStream& r) { return init_poisson(50.0, 1, 2.0, 2.0, r); };

void BM_EnsembleSerial(benchmark::State& state) {
  const ModelParams m = repulsive();
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::simulate_ensemble_serial(kInit, m, 1.0, 0.5, 1, static_cast<std::size_t>(state.range(0))));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const ModelParams m = repulsive();
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_ensemble(kInit, m, 1.0, 0.5, 1, static_cast<std::size_t>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_ConvolveSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveDirect)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveSpectral)->Arg(32)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
