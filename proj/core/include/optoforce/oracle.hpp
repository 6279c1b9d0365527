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

#ifndef OPTOFORCE_ORACLE_HPP_
#define OPTOFORCE_ORACLE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optoforce/params.hpp"

// Time-domain Monte Carlo of the linearized Langevin equations, and the
// spectral estimates used to check the closed-form spectra against it.
namespace optoforce::oracle {

enum class Observable { kX, kP, kQuadX, kQuadY, kSignal };

std::string to_string(Observable o);
// "x", "p", "X", "Y", "S"; throws ConfigError otherwise.
Observable parse_observable(const std::string& name);

struct SimulationConfig {
  double dt = 0.0;                 // s, integration step
  std::int64_t n_steps = 0;        // steps recorded per trajectory, after burn-in
  int n_trajectories = 1;
  std::uint64_t rng_seed = 0;
  std::vector<Observable> record{Observable::kSignal};
  double burn_in = 0.0;            // s
  int record_stride = 16;          // record one sample per stride steps
  int segment_length = 8192;       // Welch segment, in records; power of two
  int max_threads = 1;

  double duration() const { return dt * static_cast<double>(n_steps); }
  double record_interval() const { return dt * record_stride; }
};

// Largest step allowed, 1 / (20 max(kappa, Delta, omega_m)).
double max_step(const DerivedQuantities& d);
// Shortest burn-in allowed, 10 / (slowest decay rate of the coupled system).
double min_burn_in(const DerivedQuantities& d);

// Smallest valid dt and burn-in, stride 16, 2^20 steps, 64 trajectories.
SimulationConfig default_config(const DerivedQuantities& d);

// Throws ConfigError (bad config) or StabilityError (unstable point).
void validate_config(const DerivedQuantities& d, const SimulationConfig& config);

// x, p and the quadratures are point samples of the state at the record
// instants. S is the average of the homodyne signal over each record
// interval, so its white part has spectrum exactly 1/2.
struct Trajectory {
  std::vector<std::vector<double>> series;  // parallel to config.record
};

struct TrajectoryEnsemble {
  SimulationConfig config;
  std::vector<Trajectory> trajectories;

  const std::vector<double>& series(std::size_t trajectory, Observable o) const;
};

// One trajectory, regenerated from (seed, index) alone.
Trajectory simulate_trajectory(const DerivedQuantities& d, const SimulationConfig& config,
                               int index);
TrajectoryEnsemble simulate(const DerivedQuantities& d, const SimulationConfig& config);

// Welch estimate on omega_k = 2 pi k / (N tau), k = 0..N/2, normalized as the
// two-sided density: <s(t) s(t')> = c delta(t - t') gives psd = c.
struct PSDEstimate {
  std::vector<double> omega;   // rad/s
  std::vector<double> psd;     // observable^2 s
  std::vector<double> std_error;  // from segment scatter
  std::int64_t n_segments = 0;

  // (1 / 2 pi) int psd d omega over (-Nyquist, Nyquist).
  double integrated_variance() const;
};

enum class Window { kHann, kRectangular };

// Running sums over Welch segments; merge() is exact and associative in
// the sense needed for a fixed pairwise reduction order.
class WelchAccumulator {
 public:
  WelchAccumulator(int segment_length, double sample_interval, Window window = Window::kHann);

  void add_series(std::span<const double> samples);
  void merge(const WelchAccumulator& other);
  // Throws NumericalError with a duration hint when fewer than 8 segments.
  PSDEstimate finish() const;

  std::int64_t segments() const { return count_; }

 private:
  int length_;
  double interval_;
  Window window_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::int64_t count_ = 0;
};

PSDEstimate estimate_psd(const TrajectoryEnsemble& ensemble, Observable observable,
                         Window window = Window::kHann);

struct ComparisonRow {
  double omega = 0.0;
  double mc_signal = 0.0;
  double mc_signal_stderr = 0.0;
  double analytic_signal = 0.0;  // symmetrized S~ folded through the record averaging
  double mc_force = 0.0;         // psd(S) unfolded, over |chi_F|^2
  double analytic_force = 0.0;   // symmetrized eta
};

struct ValidationReport {
  double band_max = 0.0;  // rad/s
  double tolerance = 0.0;
  double max_deviation_signal = 0.0;
  double max_deviation_force = 0.0;
  double omega_worst_signal = 0.0;
  double omega_worst_force = 0.0;
  // Largest omega below which every bin agrees within tolerance.
  double agreement_band_signal = 0.0;
  double agreement_band_force = 0.0;
  std::int64_t n_segments = 0;
  int n_bins = 0;
  bool pass = false;
  std::vector<ComparisonRow> rows;
};

struct ValidationOptions {
  double tolerance = 0.05;
  // 0: three times the measured 3 dB bandwidth.
  double band_max = 0.0;
};

// Compare an estimate of psd(S) against the closed forms evaluated at
// `analytic` over 0 < omega <= band_max.
ValidationReport compare(const PSDEstimate& signal, const DerivedQuantities& analytic,
                         double band_max, double tolerance);

// Simulate, estimate psd(S) without keeping the series, and compare.
PSDEstimate simulate_signal_psd(const DerivedQuantities& d, const SimulationConfig& config);
ValidationReport validate(const DerivedQuantities& d, const SimulationConfig& config,
                          const ValidationOptions& options = {});

double default_band(const DerivedQuantities& d);

}  // namespace optoforce::oracle

#endif  // OPTOFORCE_ORACLE_HPP_
