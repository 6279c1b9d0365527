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

#include "optoforce/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "optoforce/constants.hpp"
#include "optoforce/detection.hpp"
#include "optoforce/discretization.hpp"
#include "optoforce/dynamics.hpp"
#include "optoforce/errors.hpp"
#include "optoforce/optimize.hpp"
#include "optoforce/rng.hpp"

namespace optoforce::oracle {

namespace {

// Relative slack on the dt and burn-in bounds, so the defaults pass.
constexpr double kBoundSlack = 1e-12;

// Runs body(i) for i in [0, n) on up to max_threads threads, even past the
// core count. Each index writes only its own slot, so results do not depend
// on scheduling.
void parallel_for(int n, int max_threads, const std::function<void(int)>& body) {
  const int threads = std::clamp(max_threads, 1, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

WelchAccumulator reduce_pairwise(std::vector<WelchAccumulator>& parts, std::size_t lo,
                                 std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  WelchAccumulator left = reduce_pairwise(parts, lo, mid);
  left.merge(reduce_pairwise(parts, mid, hi));
  return left;
}

// Shared stepping loop; sink(observable slot, value) receives each record.
template <typename Sink>
void integrate(const DerivedQuantities& d, const SimulationConfig& config, int index,
               Sink&& sink) {
  const AugmentedModel model = augmented_model(d);
  const ExactDiscretization step = discretize(model, config.dt);
  const Matrix5d& phi = step.transition;
  const Matrix5d& root = step.noise_factor;
  rng::NormalStream normals(config.rng_seed, static_cast<std::uint64_t>(index));

  Vector5d z = Vector5d::Zero();
  Vector5d n;
  const auto advance = [&] {
    for (int k = 0; k < 5; ++k) n[k] = normals.next();
    z = phi * z + root * n;
  };

  const auto burn = static_cast<std::int64_t>(std::ceil(config.burn_in / config.dt));
  for (std::int64_t i = 0; i < burn; ++i) advance();
  z[4] = 0.0;

  const double tau = config.record_interval();
  std::int64_t record = 0;
  for (std::int64_t i = 1; i <= config.n_steps; ++i) {
    advance();
    if (i % config.record_stride != 0) continue;
    for (std::size_t slot = 0; slot < config.record.size(); ++slot) {
      double v = 0.0;
      switch (config.record[slot]) {
        case Observable::kX: v = z[0] * model.length_scale; break;
        case Observable::kP: v = z[1] * model.momentum_scale; break;
        case Observable::kQuadX: v = z[2]; break;
        case Observable::kQuadY: v = z[3]; break;
        case Observable::kSignal: v = z[4] / tau; break;
      }
      sink(slot, record, v);
    }
    z[4] = 0.0;
    ++record;
  }
}

std::int64_t records_per_trajectory(const SimulationConfig& config) {
  return config.n_steps / config.record_stride;
}

}  // namespace

std::string to_string(Observable o) {
  switch (o) {
    case Observable::kX: return "x";
    case Observable::kP: return "p";
    case Observable::kQuadX: return "X";
    case Observable::kQuadY: return "Y";
    case Observable::kSignal: return "S";
  }
  return "?";
}

Observable parse_observable(const std::string& name) {
  if (name == "x") return Observable::kX;
  if (name == "p") return Observable::kP;
  if (name == "X") return Observable::kQuadX;
  if (name == "Y") return Observable::kQuadY;
  if (name == "S") return Observable::kSignal;
  throw ConfigError("observable", "expected one of x, p, X, Y, S, got '" + name + "'");
}

double max_step(const DerivedQuantities& d) {
  return 1.0 / (20.0 * std::max({d.kappa, d.detuning, d.omega_m}));
}

double min_burn_in(const DerivedQuantities& d) {
  return 10.0 / dynamics::slowest_decay_rate(d);
}

SimulationConfig default_config(const DerivedQuantities& d) {
  SimulationConfig c;
  c.dt = max_step(d);
  c.n_steps = std::int64_t{1} << 20;
  c.n_trajectories = 64;
  c.rng_seed = 1;
  c.burn_in = min_burn_in(d);
  return c;
}

void validate_config(const DerivedQuantities& d, const SimulationConfig& config) {
  const auto report = dynamics::stability(d);
  if (!report.stable) {
    throw StabilityError("operating point is unstable, refusing to integrate",
                         report.pump_ratio);
  }
  if (!(config.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (config.dt > max_step(d) * (1.0 + kBoundSlack)) {
    throw ConfigError("dt", "must not exceed 1/(20 max(kappa, Delta, omega_m)) = " +
                                std::to_string(max_step(d)) + " s");
  }
  if (config.burn_in < min_burn_in(d) * (1.0 - kBoundSlack)) {
    throw ConfigError("burn_in", "must be at least 10 / slowest decay rate = " +
                                     std::to_string(min_burn_in(d)) + " s");
  }
  if (config.n_steps <= 0) throw ConfigError("duration", "must be positive");
  if (config.n_trajectories <= 0) throw ConfigError("ntraj", "must be positive");
  if (config.record_stride <= 0) throw ConfigError("record_stride", "must be positive");
  if (config.record.empty()) throw ConfigError("observable", "nothing to record");
  if (config.max_threads <= 0) throw ConfigError("threads", "must be positive");
}

const std::vector<double>& TrajectoryEnsemble::series(std::size_t trajectory,
                                                      Observable o) const {
  const auto it = std::find(config.record.begin(), config.record.end(), o);
  if (it == config.record.end()) {
    throw ConfigError("observable", to_string(o) + " was not recorded");
  }
  return trajectories.at(trajectory).series[it - config.record.begin()];
}

Trajectory simulate_trajectory(const DerivedQuantities& d, const SimulationConfig& config,
                               int index) {
  validate_config(d, config);
  Trajectory t;
  t.series.assign(config.record.size(),
                  std::vector<double>(static_cast<std::size_t>(records_per_trajectory(config))));
  integrate(d, config, index,
            [&](std::size_t slot, std::int64_t i, double v) { t.series[slot][i] = v; });
  return t;
}

TrajectoryEnsemble simulate(const DerivedQuantities& d, const SimulationConfig& config) {
  validate_config(d, config);
  TrajectoryEnsemble e;
  e.config = config;
  e.trajectories.resize(config.n_trajectories);
  parallel_for(config.n_trajectories, config.max_threads,
               [&](int i) { e.trajectories[i] = simulate_trajectory(d, config, i); });
  return e;
}

PSDEstimate simulate_signal_psd(const DerivedQuantities& d, const SimulationConfig& in) {
  SimulationConfig config = in;
  config.record = {Observable::kSignal};
  validate_config(d, config);
  std::vector<WelchAccumulator> parts(
      config.n_trajectories, WelchAccumulator(config.segment_length, config.record_interval()));
  parallel_for(config.n_trajectories, config.max_threads, [&](int i) {
    std::vector<double> s(static_cast<std::size_t>(records_per_trajectory(config)));
    integrate(d, config, i, [&](std::size_t, std::int64_t k, double v) { s[k] = v; });
    parts[i].add_series(s);
  });
  return reduce_pairwise(parts, 0, parts.size()).finish();
}

double default_band(const DerivedQuantities& d) {
  try {
    return 3.0 * optimize::bandwidth(d).measured;
  } catch (const Error&) {
    return 0.5 * std::min(d.kappa, d.omega_m);
  }
}

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// S~ as seen in a record of tau-averages: each image at omega + k 2 pi / tau
// is weighted by sinc^2(omega tau / 2). The white 1/2 passes unchanged since
// those weights sum to one, so only the coloured part is folded.
double recorded_squeezing(const DerivedQuantities& a, double omega, double tau) {
  constexpr int kImages = 16;
  const auto s = [&](double w) {
    return detection::squeezing_at(a, w, detection::Convention::kSymmetrized).total;
  };
  double folded = 0.0;
  for (int k = -kImages; k <= kImages; ++k) {
    const double w = omega + k * constants::two_pi / tau;
    const double h = sinc(0.5 * w * tau);
    folded += (s(w) - detection::kVacuumLevel) * h * h;
  }
  return detection::kVacuumLevel + folded;
}

}  // namespace

ValidationReport compare(const PSDEstimate& signal, const DerivedQuantities& analytic,
                         double band_max, double tolerance) {
  // The last bin sits at Nyquist, pi / tau.
  const double tau = constants::pi / signal.omega.back();
  DerivedQuantities a = analytic;
  a.efficiency = 1.0;
  ValidationReport r;
  r.band_max = band_max;
  r.tolerance = tolerance;
  r.n_segments = signal.n_segments;
  bool signal_ok = true;
  bool force_ok = true;
  for (std::size_t k = 1; k < signal.omega.size(); ++k) {
    const double w = signal.omega[k];
    if (w > band_max) break;
    ComparisonRow row;
    row.omega = w;
    row.mc_signal = signal.psd[k];
    row.mc_signal_stderr = signal.std_error[k];
    const double bare = detection::squeezing_at(a, w, detection::Convention::kSymmetrized).total;
    row.analytic_signal = recorded_squeezing(a, w, tau);
    const auto eta = detection::sensitivity_at(a, w, detection::Convention::kSymmetrized);
    row.mc_force = row.mc_signal * (bare / row.analytic_signal) / eta.force_gain_sq;
    row.analytic_force = eta.total;
    r.rows.push_back(row);

    const double dev_s = std::abs(row.mc_signal / row.analytic_signal - 1.0);
    const double dev_f = std::abs(row.mc_force / row.analytic_force - 1.0);
    if (!(dev_s <= r.max_deviation_signal)) {
      r.max_deviation_signal = dev_s;
      r.omega_worst_signal = w;
    }
    if (!(dev_f <= r.max_deviation_force)) {
      r.max_deviation_force = dev_f;
      r.omega_worst_force = w;
    }
    signal_ok = signal_ok && dev_s <= tolerance;
    force_ok = force_ok && dev_f <= tolerance;
    if (signal_ok) r.agreement_band_signal = w;
    if (force_ok) r.agreement_band_force = w;
  }
  r.n_bins = static_cast<int>(r.rows.size());
  r.pass = r.n_bins > 0 && r.max_deviation_signal <= tolerance &&
           r.max_deviation_force <= tolerance;
  return r;
}

ValidationReport validate(const DerivedQuantities& d, const SimulationConfig& config,
                          const ValidationOptions& options) {
  const double band = options.band_max > 0.0 ? options.band_max : default_band(d);
  return compare(simulate_signal_psd(d, config), d, band, options.tolerance);
}

}  // namespace optoforce::oracle
