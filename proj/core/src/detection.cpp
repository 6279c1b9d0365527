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

#include "optoforce/detection.hpp"

#include <cmath>
#include <limits>

#include "optoforce/constants.hpp"
#include "optoforce/dynamics.hpp"
#include "optoforce/errors.hpp"

namespace optoforce::detection {

namespace {

using constants::hbar;
using constants::k_B;
using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

double thermal_force_psd(const DerivedQuantities& d) {
  return 2.0 * d.mass * d.gamma * k_B * d.temperature;
}

// Delta sin(theta) + (kappa - i omega) cos(theta)
cd angle_factor(const DerivedQuantities& d, double omega) {
  return d.detuning * std::sin(d.theta) + (d.kappa - kI * omega) * std::cos(d.theta);
}

cd cavity_denominator(const DerivedQuantities& d, double omega) {
  const cd k = d.kappa - kI * omega;
  return k * k + d.detuning * d.detuning;
}

// chi_X - i chi_Y = chi_F (A + B) with
//   A = 2 hbar sqrt(kappa) G / (kappa - i omega + i Delta)            backaction
//   B = [(kappa - i Delta)^2 + omega^2] (sin - i cos) / (2 sqrt(kappa) G N chi)
// B uses chi^{-1}, so it stays finite on a mechanical pole.
NoisePoint force_referred(const DerivedQuantities& d, double omega) {
  NoisePoint p;
  p.omega = omega;
  p.thermal = thermal_force_psd(d);

  const double root_kappa = std::sqrt(d.kappa);
  const cd n = angle_factor(d, omega);
  const cd inv_chi = dynamics::inverse_susceptibility(d, omega);
  const cd denom = cavity_denominator(d, omega);

  if (inv_chi == 0.0) {
    p.force_gain_sq = kInf;
  } else {
    p.force_gain_sq = std::norm(2.0 * root_kappa * d.G * n / (denom * inv_chi));
  }

  if (d.G == 0.0 || n == 0.0) {
    p.unbounded = true;
    p.force_gain_sq = 0.0;
    p.backaction = 0.0;
    p.imprecision = kInf;
    p.cross = 0.0;
    p.total = kInf;
    return p;
  }

  const cd a = 2.0 * hbar * root_kappa * d.G / (d.kappa - kI * omega + kI * d.detuning);
  const cd kd = d.kappa - kI * d.detuning;
  const cd b = (kd * kd + omega * omega) * (std::sin(d.theta) - kI * std::cos(d.theta)) /
               (2.0 * root_kappa * d.G * n) * inv_chi;
  p.backaction = 0.5 * std::norm(a);
  p.imprecision = 0.5 * std::norm(b);
  p.cross = (a * std::conj(b)).real();
  p.total = p.thermal + p.backaction + p.imprecision + p.cross;
  return p;
}

SqueezingPoint record_referred(const DerivedQuantities& d, double omega) {
  const SusceptibilityTriple s = susceptibilities(d, omega);
  SqueezingPoint p;
  p.omega = omega;
  const double gain_sq = std::norm(s.chi_F);
  p.thermal = thermal_force_psd(d) * gain_sq;

  // chi_F A and chi_F B, see force_referred().
  const cd n = angle_factor(d, omega);
  const cd denom = cavity_denominator(d, omega);
  const cd chi = 1.0 / dynamics::inverse_susceptibility(d, omega);
  const cd fa = 4.0 * hbar * d.kappa * d.G * d.G * n * chi /
                (denom * (d.kappa - kI * omega + kI * d.detuning));
  const cd kd = d.kappa - kI * d.detuning;
  const cd fb = (kd * kd + omega * omega) * (std::sin(d.theta) - kI * std::cos(d.theta)) / denom;
  p.backaction = 0.5 * std::norm(fa);
  p.imprecision = 0.5 * std::norm(fb);
  p.cross = (fa * std::conj(fb)).real();
  p.total = p.thermal + p.backaction + p.imprecision + p.cross;
  return p;
}

template <typename Point>
Point average_sidebands(const Point& plus, const Point& minus) {
  Point p = plus;
  p.total = 0.5 * (plus.total + minus.total);
  p.thermal = 0.5 * (plus.thermal + minus.thermal);
  p.backaction = 0.5 * (plus.backaction + minus.backaction);
  p.imprecision = 0.5 * (plus.imprecision + minus.imprecision);
  p.cross = 0.5 * (plus.cross + minus.cross);
  p.detection_loss = 0.5 * (plus.detection_loss + minus.detection_loss);
  return p;
}

void check_efficiency(double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw ConfigError("efficiency", "must lie in (0, 1]");
  }
}

void lose(NoisePoint& p, double efficiency) {
  if (efficiency == 1.0) return;
  const double added = (1.0 - efficiency) / (2.0 * efficiency * p.force_gain_sq);
  p.detection_loss += added;
  p.total += added;
  p.force_gain_sq *= efficiency;
}

void lose(SqueezingPoint& p, double efficiency) {
  if (efficiency == 1.0) return;
  const double vacuum = (1.0 - efficiency) * kVacuumLevel;
  p.thermal *= efficiency;
  p.backaction *= efficiency;
  p.imprecision *= efficiency;
  p.cross *= efficiency;
  p.detection_loss = efficiency * p.detection_loss + vacuum;
  p.total = efficiency * p.total + vacuum;
}

}  // namespace

SusceptibilityTriple susceptibilities(const DerivedQuantities& d, double omega) {
  const auto response = dynamics::mech_susceptibility(d, omega);
  if (response.singular()) {
    throw SingularResponse("mechanical susceptibility has a pole at omega = " +
                               std::to_string(omega) + " rad/s",
                           omega);
  }
  const cd chi = *response.chi;
  const cd k = d.kappa - kI * omega;
  const cd denom = k * k + d.detuning * d.detuning;
  const cd n = angle_factor(d, omega);
  const double s = std::sin(d.theta);
  const double c = std::cos(d.theta);
  const double k2 = d.kappa * d.kappa + omega * omega - d.detuning * d.detuning;
  const double kd2 = 2.0 * d.kappa * d.detuning;
  const cd drive = 4.0 * hbar * d.kappa * d.G * d.G * n * chi / (denom * denom);

  SusceptibilityTriple t;
  t.omega = omega;
  t.theta = d.theta;
  t.chi_F = 2.0 * std::sqrt(d.kappa) * d.G * n * chi / denom;
  t.chi_X = drive * k + (k2 * s - kd2 * c) / denom;
  t.chi_Y = drive * d.detuning + (kd2 * s + k2 * c) / denom;
  return t;
}

double NoisePoint::amplitude() const { return std::sqrt(total); }

NoisePoint sensitivity_at(const DerivedQuantities& d, double omega, Convention convention) {
  check_efficiency(d.efficiency);
  NoisePoint p = force_referred(d, omega);
  if (convention == Convention::kSymmetrized && omega != 0.0) {
    p = average_sidebands(p, force_referred(d, -omega));
  }
  if (p.unbounded) return p;
  lose(p, d.efficiency);
  return p;
}

NoiseSpectrum sensitivity(const DerivedQuantities& d, std::span<const double> omegas,
                          Convention convention) {
  NoiseSpectrum out;
  out.convention = convention;
  out.efficiency = d.efficiency;
  out.points.reserve(omegas.size());
  for (double w : omegas) out.points.push_back(sensitivity_at(d, w, convention));
  return out;
}

double SqueezingPoint::db_rel_unity() const { return 10.0 * std::log10(total); }
double SqueezingPoint::db_rel_vacuum() const { return 10.0 * std::log10(total / kVacuumLevel); }

SqueezingPoint squeezing_at(const DerivedQuantities& d, double omega, Convention convention) {
  check_efficiency(d.efficiency);
  SqueezingPoint p = record_referred(d, omega);
  if (convention == Convention::kSymmetrized && omega != 0.0) {
    p = average_sidebands(p, record_referred(d, -omega));
  }
  lose(p, d.efficiency);
  return p;
}

SqueezingSpectrum squeezing_spectrum(const DerivedQuantities& d, std::span<const double> omegas,
                                     Convention convention) {
  SqueezingSpectrum out;
  out.convention = convention;
  out.efficiency = d.efficiency;
  out.points.reserve(omegas.size());
  for (double w : omegas) out.points.push_back(squeezing_at(d, w, convention));
  return out;
}

NoiseSpectrum apply_efficiency(const NoiseSpectrum& spectrum, double efficiency) {
  check_efficiency(efficiency);
  NoiseSpectrum out = spectrum;
  out.efficiency *= efficiency;
  for (auto& p : out.points) {
    if (!p.unbounded) lose(p, efficiency);
  }
  return out;
}

SqueezingSpectrum apply_efficiency(const SqueezingSpectrum& spectrum, double efficiency) {
  check_efficiency(efficiency);
  SqueezingSpectrum out = spectrum;
  out.efficiency *= efficiency;
  for (auto& p : out.points) lose(p, efficiency);
  return out;
}

double sql_reference(const MechanicalParams& mech, double omega) {
  const cd bare = mech.omega_m * mech.omega_m - omega * omega - kI * mech.gamma * omega;
  return hbar * mech.mass * std::abs(bare);
}

double sql_reference(const DerivedQuantities& d, double omega) {
  MechanicalParams mech;
  mech.mass = d.mass;
  mech.omega_m = d.omega_m;
  mech.gamma = d.gamma;
  mech.temperature = d.temperature;
  return sql_reference(mech, omega);
}

double dc_efficiency_penalty(const DerivedQuantities& d, double efficiency) {
  check_efficiency(efficiency);
  return hbar * d.mass * d.omega_m * d.omega_m * (1.0 - efficiency) * d.kappa /
         ((1.0 - d.xi) * d.detuning);
}

double dc_sensitivity_closed_form(const DerivedQuantities& d) {
  const double r = d.detuning / d.kappa;
  return thermal_force_psd(d) +
         hbar * d.mass * d.omega_m * d.omega_m * (r / 4.0 + 1.0 / r) * d.xi * d.xi;
}

double dc_squeezing_closed_form(const DerivedQuantities& d) {
  const double r = d.detuning / d.kappa;
  const double n_over_q = d.n_th / d.Q_m;
  return n_over_q * r * (1.0 - d.xi) + 0.5 * (1.0 + 0.25 * r * r) * d.xi * d.xi;
}

}  // namespace optoforce::detection
