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

#include "optoforce/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "optoforce/constants.hpp"
#include "optoforce/detection.hpp"
#include "optoforce/dynamics.hpp"
#include "optoforce/errors.hpp"

namespace optoforce::optimize {

namespace {

using constants::hbar;
using constants::k_B;

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

DerivedQuantities point(const SystemParams& system, double detuning, double theta,
                        double pump_ratio) {
  const auto& mech = system.mechanical;
  const auto& cav = system.cavity;
  const double a0sq = threshold_alpha_sq(mech, cav.omega_c(), cav.subcavity_length,
                                         cav.kappa(), detuning);
  OperatingPoint op;
  op.pump = PumpAmplitude{std::sqrt(pump_ratio * a0sq)};
  op.detuning = EffectiveDetuning{detuning};
  op.homodyne = HomodyneAngle{theta};
  return derive(system, op);
}

DerivedQuantities branch_point(const SystemParams& system, double detuning, double xi) {
  OperatingPoint op;
  op.pump = OptimalPump{PumpRule::kNearCritical};
  op.detuning = EffectiveDetuning{detuning};
  op.homodyne = CriticalOffset{xi};
  return derive(system, op);
}

double eta0(const DerivedQuantities& d) { return detection::sensitivity_at(d, 0.0).total; }

bool near(double x, double edge, double tol) { return std::abs(x - edge) <= tol; }

}  // namespace

Minimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                       double x_tol) {
  Minimum m;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  m.evaluations = 2;
  while (b - a > x_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++m.evaluations;
  }
  if (fc < fd) {
    m.x = c;
    m.value = fc;
  } else {
    m.x = d;
    m.value = fd;
  }
  return m;
}

Minimum grid_then_golden(const std::function<double(double)>& f, double lo, double hi, int n,
                         double x_tol) {
  const double step = (hi - lo) / (n - 1);
  int best = 0;
  double best_value = f(lo);
  for (int i = 1; i < n; ++i) {
    const double v = f(lo + i * step);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = lo + std::max(best - 1, 0) * step;
  const double b = lo + std::min(best + 1, n - 1) * step;
  Minimum m = golden_section(f, a, b, x_tol);
  m.evaluations += n;
  // The refinement never returns worse than the grid; keep an edge winner.
  if (best_value < m.value) {
    m.x = lo + best * step;
    m.value = best_value;
  }
  return m;
}

PumpOptimum optimal_pump(const SystemParams& system, double detuning, double theta,
                         Branch branch) {
  if (!(detuning > 0.0)) throw PhysicsError("optimal pump requires Delta > 0");
  const auto& cav = system.cavity;
  const double kappa = cav.kappa();
  PumpOptimum p;
  p.alpha0_sq = threshold_alpha_sq(system.mechanical, cav.omega_c(), cav.subcavity_length,
                                   kappa, detuning);
  p.exact_sq = p.alpha0_sq * exact_optimal_pump_ratio(theta, kappa, detuning, branch);
  const double side = branch == Branch::kUpper ? 1.0 : -1.0;
  const double dtheta = side * (theta - critical_angle(kappa, detuning));
  p.near_critical_sq = p.alpha0_sq * (1.0 - 2.0 * kappa / detuning * dtheta);
  if (!(p.exact_sq > 0.0 && p.exact_sq <= p.alpha0_sq) ||
      !(p.near_critical_sq > 0.0 && p.near_critical_sq <= p.alpha0_sq)) {
    throw PhysicsError("theta = " + std::to_string(theta) +
                       " rad puts the optimal pump outside (0, alpha0^2]");
  }
  return p;
}

double dc_optimum(const MechanicalParams& mech, double kappa, double detuning, double xi) {
  const double r = detuning / kappa;
  return 2.0 * mech.mass * mech.gamma * k_B * mech.temperature +
         hbar * mech.mass * mech.omega_m * mech.omega_m * (r / 4.0 + 1.0 / r) * xi * xi;
}

PowerOptimum optimal_power(const SystemParams& system, double xi) {
  const auto& mech = system.mechanical;
  const auto& cav = system.cavity;
  const double omega_c = cav.omega_c();
  const double q_c = omega_c / cav.kappa();
  const double l_over_q = cav.subcavity_length / q_c;
  PowerOptimum p;
  p.input_power = 1.25 * (1.0 - xi) * mech.mass * mech.omega_m * mech.omega_m * l_over_q *
                  l_over_q * omega_c;
  p.circulating_power = p.input_power * cav.finesse() / constants::two_pi;
  return p;
}

BandwidthReport bandwidth(const DerivedQuantities& d) {
  BandwidthReport r;
  const double ratio = d.detuning / d.kappa;
  r.estimate = (1.0 + ratio * ratio) * d.xi * d.kappa;
  if (!(r.estimate > 0.0)) throw PhysicsError("bandwidth needs xi > 0");
  const auto eta = [&](double w) { return detection::sensitivity_at(d, w).total; };
  r.eta_dc = eta(0.0);
  const double target = 2.0 * r.eta_dc;

  const double step = r.estimate / 400.0;
  const int max_steps = 400 * 50;
  double lo = 0.0;
  double hi = 0.0;
  bool found = false;
  for (int i = 1; i <= max_steps; ++i) {
    const double w = i * step;
    const double v = eta(w);
    if (v < r.eta_dc) r.non_monotone = true;
    if (v >= target) {
      lo = (i - 1) * step;
      hi = w;
      found = true;
      break;
    }
  }
  if (!found) {
    throw NumericalError("eta(omega) does not reach 2 eta(0) below " +
                         std::to_string(max_steps * step) + " rad/s");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eta(mid) >= target ? hi : lo) = mid;
  }
  r.measured = 0.5 * (lo + hi);
  return r;
}

double dc_sensitivity(const SystemParams& system, double detuning, double theta,
                      double pump_ratio) {
  return eta0(point(system, detuning, theta, pump_ratio));
}

double dc_sensitivity_on_branch(const SystemParams& system, double delta_over_kappa, double xi) {
  return eta0(branch_point(system, delta_over_kappa * system.cavity.kappa(), xi));
}

Minimum numeric_optimal_pump(const SystemParams& system, double detuning, double theta) {
  // Search in t = ln(1 - ratio) so the approach to threshold is resolved.
  const auto f = [&](double t) {
    return std::log(dc_sensitivity(system, detuning, theta, -std::expm1(t)));
  };
  Minimum m = grid_then_golden(f, std::log(1e-12), std::log1p(-1e-12), 400, 1e-11);
  m.x = -std::expm1(m.x);
  m.value = std::exp(m.value);
  return m;
}

Minimum optimal_detuning_ratio(const SystemParams& system, double xi, double lo, double hi) {
  const double floor_xi = std::max(xi, kXiFloor);
  const auto f = [&](double r) { return std::log(dc_sensitivity_on_branch(system, r, floor_xi)); };
  Minimum m = grid_then_golden(f, lo, hi, 151, 1e-9);
  m.value = std::exp(m.value);
  return m;
}

OptimalPoint analytic_optimum(const SystemParams& system, double xi) {
  system.validate();
  if (!(xi >= 0.0 && xi < 1.0)) throw ConfigError("xi", "must lie in [0, 1)");
  const double kappa = system.cavity.kappa();
  const double detuning = 2.0 * kappa;

  OptimalPoint o;
  o.xi = xi;
  o.xi_evaluated = std::max(xi, kXiFloor);
  o.Delta_star = detuning;
  o.theta0 = critical_angle(kappa, detuning);
  o.theta_star = o.theta0 + offset_from_xi(xi, kappa, detuning);
  o.alpha0_sq = threshold_alpha_sq(system.mechanical, system.cavity.omega_c(),
                                   system.cavity.subcavity_length, kappa, detuning);
  o.alpha_star_sq = o.alpha0_sq * (1.0 - xi);
  const PowerOptimum power = optimal_power(system, xi);
  o.P_opt = power.input_power;
  o.P_circ = power.circulating_power;
  o.eta_dc_closed_form = dc_optimum(system.mechanical, kappa, detuning, xi);

  const DerivedQuantities d = branch_point(system, detuning, o.xi_evaluated);
  o.eta_dc = eta0(d);
  o.sql_dc = detection::sql_reference(system.mechanical, 0.0);
  const BandwidthReport bw = bandwidth(d);
  o.bandwidth_est = bw.estimate;
  o.bandwidth_measured = bw.measured;
  o.non_monotone = bw.non_monotone;
  o.stable = dynamics::stability(d).stable;
  return o;
}

namespace {

// Best theta offset s = theta - theta0 at fixed (Delta, pump ratio). The
// optimum sits within ~xi of theta0, so candidates are log spaced in |s|.
Minimum best_offset(const SystemParams& system, double detuning, double pump_ratio) {
  const double theta0 = critical_angle(system.cavity.kappa(), detuning);
  const auto f = [&](double s) {
    return std::log(dc_sensitivity(system, detuning, theta0 + s, pump_ratio));
  };
  std::vector<double> s;
  constexpr int kPerDecade = 10;
  for (int i = 8 * kPerDecade; i >= 0; --i) s.push_back(-std::pow(10.0, -i / double(kPerDecade)));
  for (int i = 0; i <= 8 * kPerDecade; ++i) s.push_back(std::pow(10.0, -i / double(kPerDecade)));
  std::sort(s.begin(), s.end());
  std::size_t best = 0;
  double best_value = f(s[0]);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double v = f(s[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = s[best == 0 ? 0 : best - 1];
  const double b = s[std::min(best + 1, s.size() - 1)];
  Minimum m = golden_section(f, a, b, 1e-9 * std::max(std::abs(s[best]), 1e-12));
  if (best_value < m.value) {
    m.x = s[best];
    m.value = best_value;
  }
  return m;
}

}  // namespace

GlobalCheck numeric_global_check(const SystemParams& system, double lo, double hi) {
  system.validate();
  const double kappa = system.cavity.kappa();
  const double t_floor = std::log(kXiFloor);
  const double t_top = std::log(0.999);
  const double r_tol = 1e-4 * (hi - lo);

  GlobalCheck check;

  // Free search: r outer, pump margin middle, theta inner.
  {
    const auto at_margin = [&](double r, double t) {
      return best_offset(system, r * kappa, -std::expm1(t)).value;
    };
    const auto over_margin = [&](double r) {
      return grid_then_golden([&](double t) { return at_margin(r, t); }, t_floor, t_top, 25,
                              1e-6);
    };
    const Minimum rm =
        grid_then_golden([&](double r) { return over_margin(r).value; }, lo, hi, 25, 1e-6);
    const Minimum tm = over_margin(rm.x);
    const double ratio = -std::expm1(tm.x);
    const Minimum sm = best_offset(system, rm.x * kappa, ratio);
    SearchResult& f = check.free;
    f.delta_over_kappa = rm.x;
    f.pump_ratio = ratio;
    f.theta_offset = sm.x;
    f.theta = critical_angle(kappa, rm.x * kappa) + sm.x;
    f.xi = xi_from_offset(sm.x, kappa, rm.x * kappa);
    f.eta_dc = std::exp(sm.value);
    f.pump_pinned = near(tm.x, t_floor, 1e-4);
    f.detuning_pinned = near(rm.x, lo, r_tol) || near(rm.x, hi, r_tol);
  }

  // Branch search: r outer, xi inner.
  {
    const double x_top = std::log(0.5);
    const auto over_xi = [&](double r) {
      return grid_then_golden(
          [&](double t) { return std::log(dc_sensitivity_on_branch(system, r, std::exp(t))); },
          t_floor, x_top, 40, 1e-8);
    };
    const Minimum rm =
        grid_then_golden([&](double r) { return over_xi(r).value; }, lo, hi, 151, 1e-9);
    const Minimum xm = over_xi(rm.x);
    SearchResult& b = check.branch;
    b.delta_over_kappa = rm.x;
    b.xi = std::exp(xm.x);
    b.theta_offset = offset_from_xi(b.xi, kappa, rm.x * kappa);
    b.theta = critical_angle(kappa, rm.x * kappa) + b.theta_offset;
    b.pump_ratio = 1.0 - b.xi;
    b.eta_dc = std::exp(xm.value);
    b.xi_pinned = near(xm.x, t_floor, 1e-4);
    b.pump_pinned = b.xi_pinned;
    b.detuning_pinned = near(rm.x, lo, r_tol) || near(rm.x, hi, r_tol);
  }

  const DerivedQuantities a = branch_point(system, 2.0 * kappa, kXiFloor);
  check.theta_analytic = a.theta;
  check.eta_analytic = eta0(a);
  return check;
}

SweepRow sweep_point(const SystemParams& system, double kappa, double delta_over_kappa,
                     double xi) {
  SystemParams s = system;
  s.cavity.loss = Linewidth{kappa};
  const DerivedQuantities d = branch_point(s, delta_over_kappa * kappa, xi);
  SweepRow row;
  row.kappa = kappa;
  row.detuning = d.detuning;
  row.xi = xi;
  const BandwidthReport bw = bandwidth(d);
  row.eta_dc = bw.eta_dc;
  row.eta_dc_over_sql = bw.eta_dc / detection::sql_reference(s.mechanical, 0.0);
  row.bandwidth_est = bw.estimate;
  row.bandwidth_measured = bw.measured;
  row.non_monotone = bw.non_monotone;
  return row;
}

}  // namespace optoforce::optimize
