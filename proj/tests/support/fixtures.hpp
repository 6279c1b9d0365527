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

#ifndef OPTOFORCE_TESTS_FIXTURES_HPP_
#define OPTOFORCE_TESTS_FIXTURES_HPP_

#include <cmath>
#include <string>

#include "optoforce/constants.hpp"
#include "optoforce/params.hpp"

namespace optoforce::testing {

inline std::string config_path(const std::string& name) {
  return std::string(OPTOFORCE_CONFIG_DIR) + "/" + name;
}

// omega_m = 2 pi 1 MHz, kappa = 0.2 omega_m, Q_m = 1e6, T = 0.
inline SystemParams base_system(double kappa_over_wm = 0.2, double temperature = 0.0) {
  SystemParams s;
  s.mechanical.mass = 5.36e-10;
  s.mechanical.omega_m = constants::two_pi * 1e6;
  s.mechanical.gamma = s.mechanical.omega_m / 1e6;
  s.mechanical.temperature = temperature;
  s.cavity.carrier = Wavelength{1.55e-6};
  s.cavity.subcavity_length = 1e-3;
  s.cavity.loss = Linewidth{kappa_over_wm * s.mechanical.omega_m};
  s.cavity.reflectivity = 0.9999;
  return s;
}

// m = 5.36e-10 kg, omega_m = 2 pi 130 kHz, lambda = 1.55 um, F = 20000, L = 1 mm.
inline SystemParams reference_system() {
  SystemParams s;
  s.mechanical.mass = 5.36e-10;
  s.mechanical.omega_m = constants::two_pi * 130e3;
  s.mechanical.gamma = s.mechanical.omega_m / 1e6;
  s.mechanical.temperature = 0.0;
  s.cavity.carrier = Wavelength{1.55e-6};
  s.cavity.subcavity_length = 1e-3;
  s.cavity.loss = Finesse{20000.0};
  s.cavity.reflectivity = std::cos(constants::two_pi / 20000.0);
  return s;
}

// Near-critical optimum: Delta = ratio kappa, theta = theta0 + dtheta,
// alpha^2 = alpha0^2 (1 - xi).
inline OperatingPoint optimum_op(const SystemParams& s, double xi, double delta_over_kappa = 2.0,
                                 PumpRule rule = PumpRule::kNearCritical) {
  OperatingPoint op;
  op.pump = OptimalPump{rule};
  op.detuning = EffectiveDetuning{delta_over_kappa * s.cavity.kappa()};
  op.homodyne = CriticalOffset{xi};
  return op;
}

inline double sql_dc(const SystemParams& s) {
  return constants::hbar * s.mechanical.mass * s.mechanical.omega_m * s.mechanical.omega_m;
}

inline double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace optoforce::testing

#endif  // OPTOFORCE_TESTS_FIXTURES_HPP_
