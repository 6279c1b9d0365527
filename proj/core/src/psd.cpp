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

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "optoforce/constants.hpp"
#include "optoforce/errors.hpp"
#include "optoforce/oracle.hpp"

namespace optoforce::oracle {

namespace {

// FFTW planning is not thread safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr std::int64_t kMinSegments = 8;

class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    in_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    out_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }
  void execute() { fftw_execute(plan_); }
  double power(int k) const { return out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1]; }
  int bins() const { return n_ / 2 + 1; }

 private:
  int n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

std::vector<double> window_values(int n, Window window) {
  std::vector<double> w(n, 1.0);
  if (window == Window::kHann) {
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(constants::two_pi * i / n));
  }
  return w;
}

}  // namespace

WelchAccumulator::WelchAccumulator(int segment_length, double sample_interval, Window window)
    : length_(segment_length), interval_(sample_interval), window_(window) {
  if (segment_length < 4 || (segment_length & (segment_length - 1)) != 0) {
    throw ConfigError("segment_length", "must be a power of two >= 4");
  }
  if (!(sample_interval > 0.0)) throw ConfigError("dt", "sample interval must be positive");
  sum_.assign(segment_length / 2 + 1, 0.0);
  sum_sq_.assign(segment_length / 2 + 1, 0.0);
}

void WelchAccumulator::add_series(std::span<const double> samples) {
  const int n = length_;
  const int hop = window_ == Window::kHann ? n / 2 : n;
  if (samples.size() < static_cast<std::size_t>(n)) return;
  const std::vector<double> w = window_values(n, window_);
  double w_sq = 0.0;
  for (double v : w) w_sq += v * v;
  const double scale = interval_ / w_sq;

  RealFft fft(n);
  for (std::size_t start = 0; start + n <= samples.size(); start += hop) {
    double* in = fft.input();
    for (int i = 0; i < n; ++i) in[i] = w[i] * samples[start + i];
    fft.execute();
    for (int k = 0; k < fft.bins(); ++k) {
      const double p = scale * fft.power(k);
      sum_[k] += p;
      sum_sq_[k] += p * p;
    }
    ++count_;
  }
}

void WelchAccumulator::merge(const WelchAccumulator& other) {
  if (other.length_ != length_ || other.interval_ != interval_ || other.window_ != window_) {
    throw NumericalError("cannot merge Welch accumulators with different settings");
  }
  for (std::size_t k = 0; k < sum_.size(); ++k) {
    sum_[k] += other.sum_[k];
    sum_sq_[k] += other.sum_sq_[k];
  }
  count_ += other.count_;
}

PSDEstimate WelchAccumulator::finish() const {
  if (count_ < kMinSegments) {
    const double needed = (kMinSegments + 1) * (length_ / 2) * interval_;
    throw NumericalError("PSD estimate needs at least " + std::to_string(kMinSegments) +
                         " segments, got " + std::to_string(count_) +
                         "; record at least " + std::to_string(needed) +
                         " s in total or shorten segment_length");
  }
  PSDEstimate e;
  e.n_segments = count_;
  const double n = static_cast<double>(count_);
  const double d_omega = constants::two_pi / (length_ * interval_);
  for (std::size_t k = 0; k < sum_.size(); ++k) {
    const double mean = sum_[k] / n;
    const double var = std::max(sum_sq_[k] / n - mean * mean, 0.0);
    e.omega.push_back(d_omega * static_cast<double>(k));
    e.psd.push_back(mean);
    e.std_error.push_back(std::sqrt(var / n));
  }
  return e;
}

double PSDEstimate::integrated_variance() const {
  if (omega.size() < 2) return 0.0;
  const double d_omega = omega[1] - omega[0];
  double total = psd.front() + psd.back();
  for (std::size_t k = 1; k + 1 < psd.size(); ++k) total += 2.0 * psd[k];
  return total * d_omega / constants::two_pi;
}

PSDEstimate estimate_psd(const TrajectoryEnsemble& ensemble, Observable observable,
                         Window window) {
  const auto& config = ensemble.config;
  WelchAccumulator acc(config.segment_length, config.record_interval(), window);
  for (std::size_t i = 0; i < ensemble.trajectories.size(); ++i) {
    acc.add_series(ensemble.series(i, observable));
  }
  return acc.finish();
}

}  // namespace optoforce::oracle
