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

#ifndef OPTOFORCE_DYNAMICS_HPP_
#define OPTOFORCE_DYNAMICS_HPP_

#include <array>
#include <complex>
#include <optional>

#include <Eigen/Core>

#include "optoforce/params.hpp"

// Linearized dynamics of the oscillator coupled to the probe mode b.
//
// Fourier convention throughout: a(t) = int d(omega) e^{-i omega t} a(omega),
// so d/dt -> -i omega.
namespace optoforce::dynamics {

struct SteadyState {
  std::complex<double> alpha;  // <a>, with the pump amplitude E taken real
  std::complex<double> beta;   // <b>
  double x_mean = 0.0;         // m
  double p_mean = 0.0;         // kg m / s
};

// <a> = E / [i (Delta_c - g) + kappa], <b> = 0, mechanical means zero.
// Throws StabilityError when alpha^2 >= alpha0^2.
SteadyState steady_state(const DerivedQuantities& d);
SteadyState steady_state(const SystemParams& params, const OperatingPoint& op);

// Fluctuation state u = (q, pi, X, Y) with q = x / x_zpf and
// pi = p / (m omega_m x_zpf), x_zpf = sqrt(hbar / (m omega_m)). The rescaling
// is a similarity transform, so spectra and stability are unchanged, but all
// entries of the drift matrix are rates of comparable size.
struct LinearModel {
  Eigen::Matrix4d drift;
  double length_scale;    // x_zpf, m
  double momentum_scale;  // m omega_m x_zpf, kg m / s
};

LinearModel linear_model(const DerivedQuantities& d);

// det(s I - A) = s^4 + c[1] s^3 + c[2] s^2 + c[3] s + c[4], c[0] = 1,
// by the Faddeev-LeVerrier recursion.
std::array<double, 5> characteristic_polynomial(const Eigen::Matrix4d& a);

// Leading Hurwitz minors of a monic quartic.
std::array<double, 4> hurwitz_minors(const std::array<double, 5>& c);

struct StabilityReport {
  bool stable = false;
  // Coefficients of det(s I - A) in SI units (1, 1/s, 1/s^2, ...).
  std::array<double, 5> characteristic_coefficients{};
  // Minors of the quartic in s / rate_scale (dimensionless).
  std::array<double, 4> hurwitz_minors{};
  double rate_scale = 0.0;  // max(kappa, Delta, omega_m)
  double pump_ratio = 0.0;  // alpha^2 / alpha0^2
  bool threshold_stable = false;  // closed-form verdict alpha^2 < alpha0^2
};

// Minors within this bound of zero count as marginal, reported unstable.
inline constexpr double kMarginalMinor = 1e-12;

StabilityReport stability(const DerivedQuantities& d);
StabilityReport stability(const SystemParams& params, const OperatingPoint& op);

// Slowest relaxation rate of the coupled system, min |Re lambda(A)|.
double slowest_decay_rate(const DerivedQuantities& d);

struct ResponseAtFrequency {
  double omega = 0.0;
  // m^{-1} chi^{-1} = omega_m^2 - omega^2 - i gamma omega - optical spring term
  std::complex<double> bracket;
  // Empty exactly on a pole.
  std::optional<std::complex<double>> chi;  // s^2 / kg
  double omega_m_eff_sq = 0.0;
  double gamma_eff = 0.0;

  bool singular() const { return !chi.has_value(); }
};

ResponseAtFrequency mech_susceptibility(const DerivedQuantities& d, double omega);

// m chi^{-1}(omega), finite even at a pole.
std::complex<double> inverse_susceptibility(const DerivedQuantities& d, double omega);

// DC optical spring: omega_m^2 - 2 hbar Delta omega_c^2 alpha^2 / (m L^2 (kappa^2 + Delta^2)).
double dc_spring_frequency_sq(const DerivedQuantities& d);

// Intracavity quadratures in terms of displacement and input noise:
//   X = X.x x + X.x_in X_in + X.y_in Y_in, likewise for Y.
struct QuadratureTransfer {
  struct Row {
    std::complex<double> x;  // 1/m
    std::complex<double> x_in;
    std::complex<double> y_in;
  };
  double omega = 0.0;
  Row X;
  Row Y;
};

QuadratureTransfer quadrature_transfer(const DerivedQuantities& d, double omega);

}  // namespace optoforce::dynamics

#endif  // OPTOFORCE_DYNAMICS_HPP_
