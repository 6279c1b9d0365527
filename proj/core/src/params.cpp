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

#include "optoforce/params.hpp"

#include <cmath>
#include <string>

#include "optoforce/constants.hpp"
#include "optoforce/errors.hpp"

namespace optoforce {

namespace {

using constants::c_light;
using constants::hbar;
using constants::k_B;

void require_positive(double value, const char* key) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(key, "must be finite and strictly positive, got " + std::to_string(value));
  }
}

}  // namespace

void MechanicalParams::validate() const {
  require_positive(mass, "mass_kg");
  require_positive(omega_m, "omega_m_rad_s");
  require_positive(gamma, "gamma_rad_s");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature_K", "must be finite and non-negative");
  }
  if (!(gamma < omega_m)) {
    throw ConfigError("gamma_rad_s", "oscillator must be underdamped (gamma < omega_m)");
  }
}

double MechanicalParams::thermal_occupancy() const {
  return k_B * temperature / (hbar * omega_m);
}

void CavityParams::validate() const {
  if (const auto* w = std::get_if<Wavelength>(&carrier)) {
    require_positive(w->meters, "wavelength_m");
  } else {
    require_positive(std::get<CarrierFrequency>(carrier).rad_per_s, "omega_c_rad_s");
  }
  require_positive(subcavity_length, "subcavity_length_m");
  if (const auto* f = std::get_if<Finesse>(&loss)) {
    require_positive(f->value, "finesse");
  } else {
    require_positive(std::get<Linewidth>(loss).rad_per_s, "kappa_rad_s");
  }
  if (!(reflectivity > 0.0 && reflectivity < 1.0)) {
    throw ConfigError("reflectivity", "|r_d| must lie in (0, 1)");
  }
}

double CavityParams::omega_c() const {
  if (const auto* w = std::get_if<Wavelength>(&carrier)) {
    return constants::two_pi * c_light / w->meters;
  }
  return std::get<CarrierFrequency>(carrier).rad_per_s;
}

double CavityParams::wavelength() const {
  if (const auto* w = std::get_if<Wavelength>(&carrier)) return w->meters;
  return constants::two_pi * c_light / std::get<CarrierFrequency>(carrier).rad_per_s;
}

double CavityParams::wavenumber() const { return omega_c() / c_light; }

double CavityParams::kappa() const {
  if (const auto* f = std::get_if<Finesse>(&loss)) {
    return constants::pi * c_light / (subcavity_length * f->value);
  }
  return std::get<Linewidth>(loss).rad_per_s;
}

double CavityParams::finesse() const {
  if (const auto* f = std::get_if<Finesse>(&loss)) return f->value;
  return constants::pi * c_light / (subcavity_length * std::get<Linewidth>(loss).rad_per_s);
}

double CavityParams::transmissivity() const {
  return std::sqrt((1.0 - reflectivity) * (1.0 + reflectivity));
}

double coupling_rate(const CavityParams& cav) {
  return std::acos(cav.reflectivity) * c_light / (2.0 * cav.subcavity_length);
}

double frequency_pull(const CavityParams& cav) {
  const double t = cav.transmissivity();
  return -std::sqrt(cav.reflectivity * std::asin(t) / t) * cav.omega_c() / cav.subcavity_length;
}

double coupling_rate_high_reflectivity(const CavityParams& cav) {
  return cav.transmissivity() * c_light / (2.0 * cav.subcavity_length);
}

double frequency_pull_high_reflectivity(const CavityParams& cav) {
  return -cav.omega_c() / cav.subcavity_length;
}

double threshold_alpha_sq(const MechanicalParams& mech, double omega_c, double length,
                          double kappa, double detuning) {
  const double wm2 = mech.omega_m * mech.omega_m;
  return mech.mass * wm2 * length * length * (kappa * kappa + detuning * detuning) /
         (2.0 * hbar * detuning * omega_c * omega_c);
}

double critical_angle(double kappa, double detuning) { return -std::atan(kappa / detuning); }

double pump_strength_from_power(double power, double kappa, double omega_c) {
  return std::sqrt(power * kappa / (hbar * omega_c));
}

double power_from_pump_strength(double pump_strength, double kappa, double omega_c) {
  return pump_strength * pump_strength * hbar * omega_c / kappa;
}

double alpha_from_pump_strength(double pump_strength, double detuning_cavity, double g,
                                double kappa) {
  return pump_strength / std::hypot(detuning_cavity - g, kappa);
}

double pump_strength_from_alpha(double alpha, double detuning_cavity, double g, double kappa) {
  return alpha * std::hypot(detuning_cavity - g, kappa);
}

double xi_from_offset(double delta_theta, double kappa, double detuning) {
  return delta_theta * 2.0 * kappa / detuning;
}

double offset_from_xi(double xi, double kappa, double detuning) {
  return xi * detuning / (2.0 * kappa);
}

double exact_optimal_pump_ratio(double theta, double kappa, double detuning, Branch branch) {
  const double s = (detuning * std::sin(theta) + kappa * std::cos(theta)) /
                   std::hypot(kappa, detuning);
  const double sign = branch == Branch::kUpper ? -1.0 : 1.0;
  return 1.0 + sign * 2.0 * kappa / detuning * s;
}

DerivedQuantities derive(const MechanicalParams& mech, const CavityParams& cav,
                         const OperatingPoint& op) {
  mech.validate();
  cav.validate();
  if (!(op.efficiency > 0.0 && op.efficiency <= 1.0)) {
    throw ConfigError("efficiency", "must lie in (0, 1]");
  }

  DerivedQuantities d;
  d.mass = mech.mass;
  d.omega_m = mech.omega_m;
  d.gamma = mech.gamma;
  d.temperature = mech.temperature;
  d.omega_c = cav.omega_c();
  d.kappa = cav.kappa();
  d.subcavity_length = cav.subcavity_length;
  d.finesse = cav.finesse();
  d.g = coupling_rate(cav);
  d.f = frequency_pull(cav);
  d.efficiency = op.efficiency;
  d.branch = op.branch;
  d.n_th = mech.thermal_occupancy();
  d.Q_m = mech.quality_factor();
  d.Q_c = d.omega_c / d.kappa;

  if (const auto* dc = std::get_if<CavityDetuning>(&op.detuning)) {
    d.detuning_cavity = dc->rad_per_s;
    d.detuning = dc->rad_per_s + d.g;
  } else {
    d.detuning = std::get<EffectiveDetuning>(op.detuning).rad_per_s;
    d.detuning_cavity = d.detuning - d.g;
  }
  if (!(d.detuning > 0.0) || !std::isfinite(d.detuning)) {
    throw PhysicsError("effective detuning Delta = Delta_c + g must be positive, got " +
                       std::to_string(d.detuning) + " rad/s");
  }

  d.alpha0_sq = threshold_alpha_sq(mech, d.omega_c, d.subcavity_length, d.kappa, d.detuning);
  d.theta0 = critical_angle(d.kappa, d.detuning);

  const double side = op.branch == Branch::kUpper ? 1.0 : -1.0;
  if (const auto* h = std::get_if<HomodyneAngle>(&op.homodyne)) {
    d.theta = h->radians;
    d.delta_theta = side * (d.theta - d.theta0);
  } else {
    d.xi = std::get<CriticalOffset>(op.homodyne).xi;
    d.delta_theta = offset_from_xi(d.xi, d.kappa, d.detuning);
    d.theta = d.theta0 + side * d.delta_theta;
  }
  d.xi = xi_from_offset(d.delta_theta, d.kappa, d.detuning);

  if (const auto* p = std::get_if<InputPower>(&op.pump)) {
    if (!(p->watts >= 0.0)) throw ConfigError("pump_power_W", "must be non-negative");
    d.input_power = p->watts;
    d.pump_strength = pump_strength_from_power(p->watts, d.kappa, d.omega_c);
    d.alpha = alpha_from_pump_strength(d.pump_strength, d.detuning_cavity, d.g, d.kappa);
    d.alpha_sq = d.alpha * d.alpha;
  } else {
    if (const auto* a = std::get_if<PumpAmplitude>(&op.pump)) {
      if (!(a->alpha >= 0.0)) throw ConfigError("alpha", "must be real and non-negative");
      d.alpha_sq = a->alpha * a->alpha;
    } else {
      const PumpRule rule = std::get<OptimalPump>(op.pump).rule;
      const double ratio = rule == PumpRule::kNearCritical
                               ? 1.0 - d.xi
                               : exact_optimal_pump_ratio(d.theta, d.kappa, d.detuning, op.branch);
      if (!(ratio > 0.0 && ratio < 1.0)) {
        throw PhysicsError("optimal pump at theta = " + std::to_string(d.theta) +
                           " rad gives alpha*^2/alpha0^2 = " + std::to_string(ratio) +
                           ", outside (0, 1); approach theta0 from the configured branch");
      }
      d.alpha_sq = ratio * d.alpha0_sq;
    }
    d.alpha = std::sqrt(d.alpha_sq);
    d.pump_strength = pump_strength_from_alpha(d.alpha, d.detuning_cavity, d.g, d.kappa);
    d.input_power = power_from_pump_strength(d.pump_strength, d.kappa, d.omega_c);
  }
  d.G = d.omega_c * d.alpha / d.subcavity_length;
  return d;
}

}  // namespace optoforce
