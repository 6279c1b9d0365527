// Copyright 2026 The optoforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "optoforce/constants.hpp"
#include "optoforce/detection.hpp"
#include "optoforce/dynamics.hpp"
#include "optoforce/optimize.hpp"
#include "optoforce/params.hpp"

namespace {

using namespace optoforce;

SystemParams base() {
  SystemParams s;
  s.mechanical.mass = 5.36e-10;
  s.mechanical.omega_m = constants::two_pi * 1e6;
  s.mechanical.gamma = s.mechanical.omega_m / 1e6;
  s.cavity.carrier = Wavelength{1.55e-6};
  s.cavity.subcavity_length = 1e-3;
  s.cavity.loss = Linewidth{0.2 * s.mechanical.omega_m};
  s.cavity.reflectivity = 0.9999;
  return s;
}

DerivedQuantities optimum(double xi = 0.01) {
  const auto s = base();
  OperatingPoint op;
  op.pump = OptimalPump{};
  op.detuning = EffectiveDetuning{2.0 * s.cavity.kappa()};
  op.homodyne = CriticalOffset{xi};
  return derive(s, op);
}

std::vector<double> grid(std::size_t n, double hi) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = hi * static_cast<double>(i) / n;
  return w;
}

void BM_Derive(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(optimum());
}
BENCHMARK(BM_Derive);

void BM_Stability(benchmark::State& state) {
  const auto d = optimum();
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::stability(d));
}
BENCHMARK(BM_Stability);

void BM_Sensitivity(benchmark::State& state) {
  const auto d = optimum();
  const auto w = grid(static_cast<std::size_t>(state.range(0)), 10.0 * d.omega_m);
  for (auto _ : state) benchmark::DoNotOptimize(detection::sensitivity(d, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sensitivity)->Arg(400)->Arg(4096);

void BM_SqueezingSymmetrized(benchmark::State& state) {
  const auto d = optimum();
  const auto w = grid(static_cast<std::size_t>(state.range(0)), 10.0 * d.omega_m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        detection::squeezing_spectrum(d, w, detection::Convention::kSymmetrized));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SqueezingSymmetrized)->Arg(400);

void BM_Bandwidth(benchmark::State& state) {
  const auto d = optimum();
  for (auto _ : state) benchmark::DoNotOptimize(optimize::bandwidth(d));
}
BENCHMARK(BM_Bandwidth);

void BM_OptimalDetuning(benchmark::State& state) {
  const auto s = base();
  for (auto _ : state) benchmark::DoNotOptimize(optimize::optimal_detuning_ratio(s, 0.01));
}
BENCHMARK(BM_OptimalDetuning);

void BM_GlobalCheck(benchmark::State& state) {
  const auto s = base();
  for (auto _ : state) benchmark::DoNotOptimize(optimize::numeric_global_check(s));
}
BENCHMARK(BM_GlobalCheck)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
