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

#ifndef OPTOFORCE_PARAMS_HPP_
#define OPTOFORCE_PARAMS_HPP_

#include <variant>

namespace optoforce {

// All quantities are SI with angular frequencies in rad/s.

struct MechanicalParams {
  double mass = 0.0;         // kg
  double omega_m = 0.0;      // rad/s
  double gamma = 0.0;        // rad/s, energy damping rate
  double temperature = 0.0;  // K

  // Throws ConfigError unless m, omega_m, gamma > 0, T >= 0, gamma < omega_m.
  void validate() const;

  double quality_factor() const { return omega_m / gamma; }
  // k_B T / (hbar omega_m), high-temperature occupancy.
  double thermal_occupancy() const;
};

struct Wavelength {
  double meters;
};
struct CarrierFrequency {
  double rad_per_s;
};
struct Finesse {
  double value;
};
struct Linewidth {
  double rad_per_s;  // kappa, amplitude decay rate
};

// Symmetric three-mirror cavity: two subcavities of length L separated by a
// partially transmitting middle mirror of amplitude reflectivity |r_d|.
struct CavityParams {
  std::variant<Wavelength, CarrierFrequency> carrier{Wavelength{0.0}};
  double subcavity_length = 0.0;  // m
  std::variant<Finesse, Linewidth> loss{Finesse{0.0}};
  double reflectivity = 0.0;  // |r_d| in (0, 1)

  void validate() const;

  double omega_c() const;
  double wavelength() const;
  double wavenumber() const;
  // kappa = pi c / (L F) when a finesse is given.
  double kappa() const;
  double finesse() const;
  // |t_d| = sqrt(1 - |r_d|^2)
  double transmissivity() const;
};

struct SystemParams {
  MechanicalParams mechanical;
  CavityParams cavity;

  void validate() const {
    mechanical.validate();
    cavity.validate();
  }
};

// --- operating point -------------------------------------------------------

struct InputPower {
  double watts;
};
struct PumpAmplitude {
  double alpha;  // real, dimensionless intracavity amplitude of mode a
};
enum class PumpRule {
  kNearCritical,  // alpha0^2 (1 - xi)
  kExact,         // alpha0^2 (1 -/+ (2 kappa/Delta) sin(theta - theta0))
};
struct OptimalPump {
  PumpRule rule = PumpRule::kNearCritical;
};

struct CavityDetuning {
  double rad_per_s;  // Delta_c = omega_c - omega_L
};
struct EffectiveDetuning {
  double rad_per_s;  // Delta = Delta_c + g
};

struct HomodyneAngle {
  double radians;
};
struct CriticalOffset {
  double xi;  // xi = dtheta * 2 kappa / Delta
};

// Side from which theta approaches the critical angle theta0.
enum class Branch { kUpper, kLower };

struct OperatingPoint {
  std::variant<InputPower, PumpAmplitude, OptimalPump> pump{PumpAmplitude{0.0}};
  std::variant<CavityDetuning, EffectiveDetuning> detuning{EffectiveDetuning{0.0}};
  std::variant<HomodyneAngle, CriticalOffset> homodyne{HomodyneAngle{0.0}};
  double efficiency = 1.0;
  Branch branch = Branch::kUpper;
};

// Every symbol of the model at one operating point. Plain value; recomputable
// from (SystemParams, OperatingPoint) by derive().
struct DerivedQuantities {
  // mechanical
  double mass = 0.0;
  double omega_m = 0.0;
  double gamma = 0.0;
  double temperature = 0.0;
  // optical
  double omega_c = 0.0;
  double kappa = 0.0;
  double subcavity_length = 0.0;
  double finesse = 0.0;
  double g = 0.0;  // left/right coupling, rad/s
  double f = 0.0;  // frequency pull, rad/(s m)
  // drive
  double detuning_cavity = 0.0;  // Delta_c
  double detuning = 0.0;         // Delta = Delta_c + g
  double alpha0_sq = 0.0;        // threshold pump
  double theta0 = 0.0;           // -atan(kappa / Delta)
  double alpha = 0.0;            // real, >= 0
  double alpha_sq = 0.0;
  double pump_strength = 0.0;    // |E|, 1/s
  double input_power = 0.0;      // W
  double G = 0.0;                // omega_c alpha / L, rad/(s m)
  // detection
  double theta = 0.0;
  double delta_theta = 0.0;  // signed distance from theta0 along the branch
  double xi = 0.0;
  double efficiency = 1.0;
  Branch branch = Branch::kUpper;
  // bookkeeping
  double n_th = 0.0;
  double Q_m = 0.0;
  double Q_c = 0.0;

  double pump_ratio() const { return alpha_sq / alpha0_sq; }
};

// Throws PhysicsError when Delta <= 0 and ConfigError on invalid inputs.
DerivedQuantities derive(const MechanicalParams& mech, const CavityParams& cav,
                         const OperatingPoint& op);
inline DerivedQuantities derive(const SystemParams& params, const OperatingPoint& op) {
  return derive(params.mechanical, params.cavity, op);
}

// --- closed-form building blocks --------------------------------------------

// g = arccos(|r_d|) c / (2 L)
double coupling_rate(const CavityParams& cav);
// f = -sqrt(|r_d| arcsin(|t_d|) / |t_d|) omega_c / L
double frequency_pull(const CavityParams& cav);
// |r_d| -> 1 forms: g = |t_d| c / (2L), f = -omega_c / L
double coupling_rate_high_reflectivity(const CavityParams& cav);
double frequency_pull_high_reflectivity(const CavityParams& cav);

// alpha0^2 = m omega_m^2 L^2 (kappa^2 + Delta^2) / (2 hbar Delta omega_c^2)
double threshold_alpha_sq(const MechanicalParams& mech, double omega_c, double length,
                          double kappa, double detuning);
double critical_angle(double kappa, double detuning);

// |E| = sqrt(P kappa / (hbar omega_L)), with omega_L ~ omega_c.
double pump_strength_from_power(double power, double kappa, double omega_c);
double power_from_pump_strength(double pump_strength, double kappa, double omega_c);
// |alpha| = |E| / |i (Delta_c - g) + kappa|
double alpha_from_pump_strength(double pump_strength, double detuning_cavity, double g,
                                double kappa);
double pump_strength_from_alpha(double alpha, double detuning_cavity, double g,
                                double kappa);

double xi_from_offset(double delta_theta, double kappa, double detuning);
double offset_from_xi(double xi, double kappa, double detuning);

// Optimal pump ratio alpha*^2 / alpha0^2 at angle theta, full sine form:
//   1 -/+ (2 kappa / Delta) (Delta sin(theta) + kappa cos(theta)) / sqrt(kappa^2 + Delta^2)
// (minus on the upper branch).
double exact_optimal_pump_ratio(double theta, double kappa, double detuning, Branch branch);

}  // namespace optoforce

#endif  // OPTOFORCE_PARAMS_HPP_
