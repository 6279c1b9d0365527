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

#ifndef OPTOFORCE_DETECTION_HPP_
#define OPTOFORCE_DETECTION_HPP_

#include <complex>
#include <span>
#include <vector>

#include "optoforce/params.hpp"

// Homodyne readout of the probe mode. The measured signal is
//   S(omega) = chi_F F(omega) + chi_X X_in(omega) + chi_Y Y_in(omega),
// S = sin(theta) X_out + cos(theta) Y_out, X_out = sqrt(2 kappa) X - X_in.
namespace optoforce::detection {

struct SusceptibilityTriple {
  double omega = 0.0;
  double theta = 0.0;
  std::complex<double> chi_F;  // 1/N
  std::complex<double> chi_X;
  std::complex<double> chi_Y;

  // chi_X - i chi_Y, the combination that enters every spectrum.
  std::complex<double> optical() const { return chi_X - std::complex<double>(0.0, 1.0) * chi_Y; }
};

// Throws SingularResponse on a mechanical pole.
SusceptibilityTriple susceptibilities(const DerivedQuantities& d, double omega);

// kDirect: 1/2 |chi_X - i chi_Y|^2 as written with the input correlations
// <X_in Y_in> = +-i/2. kSymmetrized: 1/2 (|chi_X|^2 + |chi_Y|^2), the
// average of kDirect at +omega and -omega, which is what a real record shows.
enum class Convention { kDirect, kSymmetrized };

// One grid point of the force-referred noise eta(omega), N^2/Hz.
// total = thermal + backaction + imprecision + cross + detection_loss.
struct NoisePoint {
  double omega = 0.0;
  double total = 0.0;
  double thermal = 0.0;
  double backaction = 0.0;
  double imprecision = 0.0;
  double cross = 0.0;
  double detection_loss = 0.0;
  double force_gain_sq = 0.0;  // |chi_F|^2, 1/N^2
  // chi_F = 0: the record carries no force signal, total is +inf.
  bool unbounded = false;

  double amplitude() const;  // sqrt(total), N/sqrt(Hz)
};

struct NoiseSpectrum {
  Convention convention = Convention::kDirect;
  double efficiency = 1.0;
  std::vector<NoisePoint> points;
};

// Uses d.theta and applies d.efficiency.
NoisePoint sensitivity_at(const DerivedQuantities& d, double omega,
                          Convention convention = Convention::kDirect);
NoiseSpectrum sensitivity(const DerivedQuantities& d, std::span<const double> omegas,
                          Convention convention = Convention::kDirect);

// Squeezing spectrum S~ = 2 m gamma k_B T |chi_F|^2 + 1/2 |chi_X - i chi_Y|^2,
// with the same split into components.
struct SqueezingPoint {
  double omega = 0.0;
  double total = 0.0;
  double thermal = 0.0;
  double backaction = 0.0;
  double imprecision = 0.0;
  double cross = 0.0;
  double detection_loss = 0.0;

  double db_rel_unity() const;
  double db_rel_vacuum() const;  // vacuum level 1/2
};

struct SqueezingSpectrum {
  Convention convention = Convention::kDirect;
  double efficiency = 1.0;
  std::vector<SqueezingPoint> points;
};

inline constexpr double kVacuumLevel = 0.5;

SqueezingPoint squeezing_at(const DerivedQuantities& d, double omega,
                            Convention convention = Convention::kDirect);
SqueezingSpectrum squeezing_spectrum(const DerivedQuantities& d,
                                     std::span<const double> omegas,
                                     Convention convention = Convention::kDirect);

// Finite detection efficiency P as a beam splitter before the detector:
// S' = P S + (1 - P)/2 and eta' = eta + (1 - P)/(2 P |chi_F|^2).
// Throws ConfigError unless P in (0, 1].
NoiseSpectrum apply_efficiency(const NoiseSpectrum& spectrum, double efficiency);
SqueezingSpectrum apply_efficiency(const SqueezingSpectrum& spectrum, double efficiency);

// hbar / |chi_bare(omega)| = hbar m |omega_m^2 - omega^2 - i gamma omega|.
double sql_reference(const MechanicalParams& mech, double omega);
double sql_reference(const DerivedQuantities& d, double omega);

// Added DC noise at the optimum, hbar m omega_m^2 (1 - P) kappa / ((1 - xi) Delta),
// the P -> 1 form of the efficiency correction.
double dc_efficiency_penalty(const DerivedQuantities& d, double efficiency);

// DC closed forms at the optimum.
//   eta(0) = 2 m gamma k_B T + hbar m omega_m^2 (Delta/4kappa + kappa/Delta) xi^2
//   S~(0)  = (n_th/Q_m)(Delta/kappa)(1 - xi) + 1/2 [1 + (Delta/2kappa)^2] xi^2
double dc_sensitivity_closed_form(const DerivedQuantities& d);
double dc_squeezing_closed_form(const DerivedQuantities& d);

}  // namespace optoforce::detection

#endif  // OPTOFORCE_DETECTION_HPP_
