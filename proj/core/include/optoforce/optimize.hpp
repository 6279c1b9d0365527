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

#ifndef OPTOFORCE_OPTIMIZE_HPP_
#define OPTOFORCE_OPTIMIZE_HPP_

#include <functional>

#include "optoforce/params.hpp"

namespace optoforce::optimize {

// Lower bound on the critical offset xi and on the pump margin
// 1 - alpha^2/alpha0^2 along every numeric path.
inline constexpr double kXiFloor = 1e-4;

struct Minimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

// Golden-section search for a minimum of a unimodal f on [lo, hi].
Minimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                       double x_tol);

// Sample f on n evenly spaced points, then refine around the best one.
Minimum grid_then_golden(const std::function<double(double)>& f, double lo, double hi, int n,
                         double x_tol);

// Optimal pump at detuning Delta and angle theta.
struct PumpOptimum {
  double alpha0_sq = 0.0;
  double exact_sq = 0.0;          // full sine form
  double near_critical_sq = 0.0;  // alpha0^2 (1 - (2 kappa/Delta) dtheta)
};

// Throws PhysicsError when either form leaves (0, alpha0^2).
PumpOptimum optimal_pump(const SystemParams& system, double detuning, double theta,
                         Branch branch = Branch::kUpper);

// eta(0) = 2 m gamma k_B T + hbar m omega_m^2 (Delta/4kappa + kappa/Delta) xi^2
double dc_optimum(const MechanicalParams& mech, double kappa, double detuning, double xi);

struct PowerOptimum {
  double input_power = 0.0;       // W
  double circulating_power = 0.0;  // W, P_opt F / (2 pi)
};

// P_opt = (5/4)(1 - xi) m omega_m^2 (L/Q_c)^2 omega_c, at Delta_c = g = kappa.
PowerOptimum optimal_power(const SystemParams& system, double xi);

struct BandwidthReport {
  double estimate = 0.0;  // [1 + (Delta/kappa)^2] xi kappa
  double measured = 0.0;  // first omega > 0 with eta(omega) = 2 eta(0)
  double eta_dc = 0.0;
  // eta dips below eta(0) before the crossing.
  bool non_monotone = false;
};

// Throws NumericalError when eta never doubles within 50 estimates.
BandwidthReport bandwidth(const DerivedQuantities& d);

// Full numeric eta(0) at (Delta, theta, alpha^2 / alpha0^2).
double dc_sensitivity(const SystemParams& system, double detuning, double theta,
                      double pump_ratio);

// Same along the near-critical family theta = theta0 + xi Delta/(2 kappa),
// alpha^2 = alpha0^2 (1 - xi), Delta = r kappa.
double dc_sensitivity_on_branch(const SystemParams& system, double delta_over_kappa, double xi);

// Pump ratio minimizing the numeric eta(0) at fixed (Delta, theta).
Minimum numeric_optimal_pump(const SystemParams& system, double detuning, double theta);

// argmin over Delta/kappa in [lo, hi] of dc_sensitivity_on_branch.
Minimum optimal_detuning_ratio(const SystemParams& system, double xi, double lo = 0.5,
                               double hi = 8.0);

struct OptimalPoint {
  double xi = 0.0;          // as configured
  double xi_evaluated = 0.0;  // max(xi, kXiFloor), used for numeric fields
  double theta_star = 0.0;
  double theta0 = 0.0;
  double alpha_star_sq = 0.0;
  double alpha0_sq = 0.0;
  double Delta_star = 0.0;
  double P_opt = 0.0;
  double P_circ = 0.0;
  double eta_dc = 0.0;          // numeric, at xi_evaluated
  double eta_dc_closed_form = 0.0;  // at xi
  double sql_dc = 0.0;
  double bandwidth_est = 0.0;
  double bandwidth_measured = 0.0;
  bool non_monotone = false;
  bool stable = false;
};

// Delta = 2 kappa, theta = theta0 + xi, alpha^2 = alpha0^2 (1 - xi).
OptimalPoint analytic_optimum(const SystemParams& system, double xi);

struct SearchResult {
  double theta = 0.0;
  double theta_offset = 0.0;  // theta - theta0 at the found Delta
  double pump_ratio = 0.0;
  double delta_over_kappa = 0.0;
  double xi = 0.0;  // offset 2 kappa (theta - theta0) / Delta
  double eta_dc = 0.0;
  bool pump_pinned = false;    // pump margin at kXiFloor
  bool xi_pinned = false;      // branch search: xi at kXiFloor
  bool detuning_pinned = false;  // Delta/kappa at a box edge
};

struct GlobalCheck {
  // Unconstrained in (theta, pump, Delta/kappa), pump margin >= kXiFloor.
  SearchResult free;
  // Restricted to the near-critical family, xi >= kXiFloor.
  SearchResult branch;
  // Analytic point at xi = kXiFloor for comparison.
  double theta_analytic = 0.0;
  double eta_analytic = 0.0;
};

GlobalCheck numeric_global_check(const SystemParams& system, double delta_over_kappa_lo = 0.5,
                                 double delta_over_kappa_hi = 8.0);

// One row of a parameter sweep along the near-critical family.
struct SweepRow {
  double kappa = 0.0;
  double detuning = 0.0;
  double xi = 0.0;
  double eta_dc = 0.0;
  double eta_dc_over_sql = 0.0;
  double bandwidth_est = 0.0;
  double bandwidth_measured = 0.0;
  bool non_monotone = false;
};

SweepRow sweep_point(const SystemParams& system, double kappa, double delta_over_kappa,
                     double xi);

}  // namespace optoforce::optimize

#endif  // OPTOFORCE_OPTIMIZE_HPP_
