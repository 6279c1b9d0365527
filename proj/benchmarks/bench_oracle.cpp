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

#include <random>
#include <vector>

#include "optoforce/constants.hpp"
#include "optoforce/oracle.hpp"
#include "optoforce/params.hpp"
#include "optoforce/rng.hpp"

namespace {

using namespace optoforce;

DerivedQuantities optimum() {
  SystemParams s;
  s.mechanical.mass = 5.36e-10;
  s.mechanical.omega_m = constants::two_pi * 1e6;
  s.mechanical.gamma = s.mechanical.omega_m / 1e6;
  s.cavity.carrier = Wavelength{1.55e-6};
  s.cavity.subcavity_length = 1e-3;
  s.cavity.loss = Linewidth{0.2 * s.mechanical.omega_m};
  s.cavity.reflectivity = 0.9999;
  OperatingPoint op;
  op.pump = OptimalPump{};
  op.detuning = EffectiveDetuning{2.0 * s.cavity.kappa()};
  op.homodyne = CriticalOffset{0.01};
  return derive(s, op);
}

// Per integration step; burn-in is included but amortized over 2^18 steps.
void BM_Trajectory(benchmark::State& state) {
  const auto d = optimum();
  auto config = oracle::default_config(d);
  config.n_trajectories = 1;
  config.n_steps = std::int64_t{1} << 18;
  int index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::simulate_trajectory(d, config, index++));
  state.SetItemsProcessed(state.iterations() * config.n_steps);
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

void BM_Welch(benchmark::State& state) {
  const int segment = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::vector<double> x(std::size_t{1} << 18);
  for (auto& v : x) v = n(rng);
  for (auto _ : state) {
    oracle::WelchAccumulator acc(segment, 1e-6);
    acc.add_series(x);
    benchmark::DoNotOptimize(acc.finish());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Welch)->Arg(1024)->Arg(8192);

void BM_Philox(benchmark::State& state) {
  for (auto _ : state) {
    rng::NormalStream gen(7, 0);
    double acc = 0.0;
    for (int i = 0; i < 1024; ++i) acc += gen.next();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Philox);

}  // namespace
