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

#include "optoforce/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "optoforce/constants.hpp"
#include "optoforce/errors.hpp"

namespace optoforce::dynamics {

namespace {

using constants::hbar;
using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// (kappa - i omega)^2 + Delta^2
cd cavity_denominator(const DerivedQuantities& d, double omega) {
  const cd k = d.kappa - kI * omega;
  return k * k + d.detuning * d.detuning;
}

}  // namespace

SteadyState steady_state(const DerivedQuantities& d) {
  if (d.alpha_sq >= d.alpha0_sq) {
    throw StabilityError("pump above the stability threshold (alpha^2/alpha0^2 = " +
                             std::to_string(d.pump_ratio()) + ")",
                         d.pump_ratio());
  }
  SteadyState s;
  s.alpha = d.pump_strength / (kI * (d.detuning_cavity - d.g) + d.kappa);
  s.beta = 0.0;
  return s;
}

SteadyState steady_state(const SystemParams& params, const OperatingPoint& op) {
  return steady_state(derive(params, op));
}

LinearModel linear_model(const DerivedQuantities& d) {
  LinearModel model;
  model.length_scale = std::sqrt(hbar / (d.mass * d.omega_m));
  model.momentum_scale = d.mass * d.omega_m * model.length_scale;
  const double coupling = std::numbers::sqrt2 * d.G * model.length_scale;
  // clang-format off
  model.drift <<
      0.0,        d.omega_m,  0.0,         0.0,
     -d.omega_m, -d.gamma,    coupling,    0.0,
      0.0,        0.0,       -d.kappa,     d.detuning,
      coupling,   0.0,       -d.detuning, -d.kappa;
  // clang-format on
  return model;
}

std::array<double, 5> characteristic_polynomial(const Eigen::Matrix4d& a) {
  std::array<double, 5> c{};
  c[0] = 1.0;
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  const Eigen::Matrix4d identity = Eigen::Matrix4d::Identity();
  for (int k = 1; k <= 4; ++k) {
    m = a * m + c[k - 1] * identity;
    c[k] = -(a * m).trace() / k;
  }
  return c;
}

std::array<double, 4> hurwitz_minors(const std::array<double, 5>& c) {
  const double d1 = c[1];
  const double d2 = c[1] * c[2] - c[3];
  const double d3 = c[3] * d2 - c[1] * c[1] * c[4];
  const double d4 = c[4] * d3;
  return {d1, d2, d3, d4};
}

StabilityReport stability(const DerivedQuantities& d) {
  if (!(d.detuning > 0.0)) {
    throw PhysicsError("stability analysis requires a positive effective detuning");
  }
  StabilityReport report;
  report.pump_ratio = d.pump_ratio();
  report.threshold_stable = d.alpha_sq < d.alpha0_sq;
  report.rate_scale = std::max({d.kappa, d.detuning, d.omega_m});

  const Eigen::Matrix4d a = linear_model(d).drift;
  report.characteristic_coefficients = characteristic_polynomial(a);
  const auto normalized = characteristic_polynomial(a / report.rate_scale);
  report.hurwitz_minors = hurwitz_minors(normalized);
  report.stable = std::all_of(report.hurwitz_minors.begin(), report.hurwitz_minors.end(),
                              [](double m) { return m > kMarginalMinor; });
  return report;
}

StabilityReport stability(const SystemParams& params, const OperatingPoint& op) {
  return stability(derive(params, op));
}

double slowest_decay_rate(const DerivedQuantities& d) {
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(linear_model(d).drift, false);
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& lambda : solver.eigenvalues()) slowest = std::min(slowest, -lambda.real());
  return slowest;
}

std::complex<double> inverse_susceptibility(const DerivedQuantities& d, double omega) {
  const double spring = 2.0 * hbar * d.G * d.G * d.detuning / d.mass;
  const cd bracket = d.omega_m * d.omega_m - omega * omega - kI * d.gamma * omega -
                     spring / cavity_denominator(d, omega);
  return d.mass * bracket;
}

ResponseAtFrequency mech_susceptibility(const DerivedQuantities& d, double omega) {
  ResponseAtFrequency r;
  r.omega = omega;
  r.bracket = inverse_susceptibility(d, omega) / d.mass;
  r.omega_m_eff_sq = r.bracket.real() + omega * omega;
  if (omega == 0.0) {
    const double k2d2 = d.kappa * d.kappa + d.detuning * d.detuning;
    const double spring0 = 2.0 * hbar * d.G * d.G * d.detuning / (d.mass * k2d2);
    r.gamma_eff = d.gamma + 2.0 * d.kappa * spring0 / k2d2;
  } else {
    r.gamma_eff = -r.bracket.imag() / omega;
  }
  const double scale = d.omega_m * d.omega_m + omega * omega + d.gamma * std::abs(omega);
  if (std::abs(r.bracket) > 1e-12 * scale) r.chi = 1.0 / (d.mass * r.bracket);
  return r;
}

double dc_spring_frequency_sq(const DerivedQuantities& d) {
  const double k2d2 = d.kappa * d.kappa + d.detuning * d.detuning;
  const double l2 = d.subcavity_length * d.subcavity_length;
  return d.omega_m * d.omega_m -
         2.0 * hbar * d.detuning * d.omega_c * d.omega_c * d.alpha_sq / (d.mass * l2 * k2d2);
}

QuadratureTransfer quadrature_transfer(const DerivedQuantities& d, double omega) {
  const cd denom = cavity_denominator(d, omega);
  const cd k = d.kappa - kI * omega;
  const double drive = std::numbers::sqrt2 * d.G;  // sqrt(2) omega_c alpha / L
  const double port = std::sqrt(2.0 * d.kappa);

  QuadratureTransfer t;
  t.omega = omega;
  t.X = {drive * d.detuning / denom, port * k / denom, port * d.detuning / denom};
  t.Y = {drive * k / denom, -port * d.detuning / denom, port * k / denom};
  return t;
}

}  // namespace optoforce::dynamics
