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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "optoforce/constants.hpp"
#include "optoforce/detection.hpp"
#include "optoforce/dynamics.hpp"
#include "optoforce/errors.hpp"
#include "optoforce/optimize.hpp"

namespace optoforce {
namespace {

using testing::base_system;
using testing::optimum_op;
using testing::reference_system;
using testing::rel;
using testing::sql_dc;

// Values from an independent high-precision evaluation of the power formula.
constexpr double kReferencePopt = 8.157057633793537e-4;
constexpr double kReferencePcirc = 2.596472087007442;

double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double cov = sxy - sx * sy / n;
  return cov * cov / ((sxx - sx * sx / n) * (syy - sy * sy / n));
}

TEST(Optimize, GoldenSectionFindsParabolaMinimum) {
  const auto m = optimize::golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0,
                                          2.0, 1e-10);
  EXPECT_NEAR(m.x, 0.3, 1e-9);
  const auto g = optimize::grid_then_golden([](double x) { return std::cos(x); }, 0.0, 6.0, 31,
                                            1e-10);
  // A quadratic minimum is located to ~sqrt(machine epsilon).
  EXPECT_NEAR(g.x, constants::pi, 1e-7);
}

TEST(Optimize, GridKeepsEdgeMinimum) {
  const auto m = optimize::grid_then_golden([](double x) { return x; }, 1.0, 2.0, 11, 1e-10);
  EXPECT_NEAR(m.x, 1.0, 1e-9);
}

TEST(Optimize, ReferenceDevicePower) {
  const auto p = optimize::optimal_power(reference_system(), 0.0);
  EXPECT_LT(rel(p.input_power, kReferencePopt), 1e-12);
  EXPECT_LT(rel(p.circulating_power, kReferencePcirc), 1e-12);
  EXPECT_LT(rel(p.input_power, 0.816e-3), 0.01);
  EXPECT_LT(rel(p.circulating_power, 2.56), 0.05);
  EXPECT_EQ(optimize::optimal_power(reference_system(), 1.0).input_power, 0.0);
}

TEST(Optimize, PowerFormulaMatchesDerivedInputPower) {
  // At Delta = 2 kappa with g = kappa the cavity detuning is g, so the pump is on resonance.
  const auto s = reference_system();
  for (double xi : {0.001, 0.1}) {
    const auto d = derive(s, optimum_op(s, xi));
    EXPECT_LT(rel(d.input_power, optimize::optimal_power(s, xi).input_power), 1e-6) << xi;
  }
}

TEST(Optimize, OptimalPumpForms) {
  const auto s = base_system();
  const double kappa = s.cavity.kappa();
  const double delta = 2.0 * kappa;
  const double theta0 = critical_angle(kappa, delta);
  const auto at0 = optimize::optimal_pump(s, delta, theta0 + 1e-12);
  EXPECT_LT(rel(at0.exact_sq, at0.alpha0_sq), 1e-10);
  const auto p = optimize::optimal_pump(s, delta, theta0 + 0.01);
  EXPECT_LT(rel(p.near_critical_sq, p.alpha0_sq * (1.0 - 0.01)), 1e-14);
  EXPECT_LT(rel(p.exact_sq, p.near_critical_sq), 1e-4);
  EXPECT_THROW(optimize::optimal_pump(s, delta, theta0 - 0.01), PhysicsError);
  EXPECT_THROW(optimize::optimal_pump(s, -delta, theta0), PhysicsError);
}

TEST(Optimize, NumericPumpReproducesClosedForm) {
  const auto s = base_system();
  const double kappa = s.cavity.kappa();
  for (double r : {0.5, 1.0, 2.0, 3.0}) {
    const double delta = r * kappa;
    const double theta0 = critical_angle(kappa, delta);
    for (double dtheta : {0.001, 0.005, 0.01, 0.02, 0.04}) {
      const double theta = theta0 + dtheta;
      const auto m = optimize::numeric_optimal_pump(s, delta, theta);
      const double exact = exact_optimal_pump_ratio(theta, kappa, delta, Branch::kUpper);
      // The closed form is first order in eps = (2 kappa / Delta) dtheta; the
      // numeric optimum is close to 1 / (1 + eps), so they part at order eps^2.
      const double eps = 1.0 - exact;
      EXPECT_LT(rel(m.x, exact), 1.1 * eps * eps) << r << " " << dtheta;
      if (eps <= 0.03) EXPECT_LT(rel(m.x, exact), 1e-3) << r << " " << dtheta;
    }
  }
}

TEST(Optimize, DcOptimumEqualsXiSquaredSql) {
  const auto s = base_system();
  const double kappa = s.cavity.kappa();
  for (double xi : {0.001, 0.01}) {
    EXPECT_LT(rel(optimize::dc_optimum(s.mechanical, kappa, 2.0 * kappa, xi), sql_dc(s) * xi * xi),
              1e-14);
    EXPECT_LT(rel(optimize::dc_sensitivity_on_branch(s, 2.0, xi), sql_dc(s) * xi * xi), 0.01);
  }
  for (double xi : {0.05, 0.1}) {
    EXPECT_LT(rel(optimize::dc_sensitivity_on_branch(s, 2.0, xi), sql_dc(s) * xi * xi), 0.1);
  }
}

TEST(Optimize, ThermalFloorAtZeroOffset) {
  const auto s = base_system(0.2, 300.0);
  const double thermal = 2.0 * s.mechanical.mass * s.mechanical.gamma * constants::k_B * 300.0;
  EXPECT_EQ(optimize::dc_optimum(s.mechanical, 1.0, 2.0, 0.0), thermal);
  EXPECT_LT(rel(optimize::dc_sensitivity_on_branch(s, 2.0, 1e-6), thermal), 1e-3);
}

TEST(Optimize, BranchDetuningArgminIsTwo) {
  const auto s = base_system();
  for (double xi : {0.001, 0.01}) {
    const auto m = optimize::optimal_detuning_ratio(s, xi);
    EXPECT_NEAR(m.x, 2.0, 0.04) << xi;
  }
}

TEST(Optimize, ThermalDominatedSensitivityIgnoresOperatingPoint) {
  auto s = base_system(0.2, 300.0);
  s.mechanical.gamma = s.mechanical.omega_m / 100.0;
  const double thermal = 2.0 * s.mechanical.mass * s.mechanical.gamma * constants::k_B * 300.0;
  const double kappa = s.cavity.kappa();
  for (double r : {1.0, 3.0}) {
    const double theta = critical_angle(kappa, r * kappa) + 0.02;
    EXPECT_LT(rel(optimize::dc_sensitivity(s, r * kappa, theta, 0.5), thermal), 0.05) << r;
  }
}

TEST(Optimize, AnalyticOptimum) {
  const auto s = base_system();
  const auto o = optimize::analytic_optimum(s, 0.01);
  EXPECT_TRUE(o.stable);
  EXPECT_GT(o.theta_star, o.theta0);
  EXPECT_LT(o.theta_star, o.theta0 + constants::pi / 2.0);
  EXPECT_LT(o.alpha_star_sq, o.alpha0_sq);
  EXPECT_LT(rel(o.eta_dc, o.eta_dc_closed_form), 0.01);
  EXPECT_LT(rel(o.eta_dc_closed_form, 1e-4 * o.sql_dc), 1e-14);
  EXPECT_GT(o.bandwidth_measured, 0.5 * o.bandwidth_est);
  EXPECT_LT(o.bandwidth_measured, 2.0 * o.bandwidth_est);
}

TEST(Optimize, AnalyticOptimumAtZeroOffsetUsesFloor) {
  const auto o = optimize::analytic_optimum(base_system(), 0.0);
  EXPECT_EQ(o.xi_evaluated, optimize::kXiFloor);
  EXPECT_EQ(o.eta_dc_closed_form, 0.0);
  EXPECT_EQ(o.theta_star, o.theta0);
  EXPECT_THROW(optimize::analytic_optimum(base_system(), 1.0), ConfigError);
}

TEST(Optimize, BandwidthLinearInXi) {
  const auto s = base_system();
  std::vector<double> xs, bw;
  for (double xi = 0.005; xi <= 0.0501; xi += 0.005) {
    xs.push_back(xi);
    bw.push_back(optimize::bandwidth(derive(s, optimum_op(s, xi))).measured);
  }
  EXPECT_GT(r_squared(xs, bw), 0.99);
  const double b1 = optimize::bandwidth(derive(s, optimum_op(s, 0.01))).measured;
  const double b2 = optimize::bandwidth(derive(s, optimum_op(s, 0.02))).measured;
  EXPECT_NEAR(b2 / b1, 2.0, 0.2);
}

TEST(Optimize, BandwidthLinearInKappa) {
  std::vector<double> ks, bw;
  for (double k = 0.05; k <= 0.3001; k += 0.025) {
    const auto s = base_system(k);
    ks.push_back(k);
    bw.push_back(optimize::bandwidth(derive(s, optimum_op(s, 0.01))).measured);
  }
  EXPECT_GT(r_squared(ks, bw), 0.99);
}

TEST(Optimize, BandwidthWithinFactorTwoOfEstimate) {
  for (double k : {0.05, 0.2, 0.5}) {
    for (double xi : {0.005, 0.05}) {
      for (double r : {1.0, 1.5, 2.0}) {
        const auto s = base_system(k);
        const auto b = optimize::bandwidth(derive(s, optimum_op(s, xi, r)));
        EXPECT_GT(b.measured / b.estimate, 0.5) << k << " " << xi << " " << r;
        EXPECT_LT(b.measured / b.estimate, 2.0) << k << " " << xi << " " << r;
      }
    }
  }
}

TEST(Optimize, BandwidthNarrowerThanHalfEstimateAtLargeDetuning) {
  // Following the sqrt(1 + r^2) / (1 + r^2) trend, the ratio leaves the
  // factor-two window between Delta/kappa = 2.5 and 4 depending on kappa/omega_m.
  for (double k : {0.05, 0.2, 0.5}) {
    const auto s = base_system(k);
    const auto b = optimize::bandwidth(derive(s, optimum_op(s, 0.01, 4.0)));
    EXPECT_LT(b.measured / b.estimate, 0.5) << k;
    EXPECT_GT(b.measured / b.estimate, 0.1) << k;
  }
}

TEST(Optimize, BandwidthRatioTrendVersusDetuning) {
  const auto s = base_system();
  std::vector<double> measured, trend;
  for (double r : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    const auto b = optimize::bandwidth(derive(s, optimum_op(s, 0.01, r)));
    measured.push_back(b.measured / b.estimate);
    trend.push_back(std::sqrt(1.0 + r * r) / (1.0 + r * r));
  }
  for (std::size_t i = 1; i < measured.size(); ++i) EXPECT_LT(measured[i], measured[i - 1]);
  EXPECT_GT(r_squared(trend, measured), 0.95);
}

TEST(Optimize, BandwidthRequiresPositiveOffset) {
  const auto s = base_system();
  auto d = derive(s, optimum_op(s, 0.01));
  d.xi = 0.0;
  EXPECT_THROW(optimize::bandwidth(d), PhysicsError);
}

TEST(Optimize, EveryAnalyticOptimumIsStable) {
  for (double k : {0.05, 0.2, 0.5, 2.0}) {
    for (double xi : {1e-4, 0.01, 0.3}) {
      const auto s = base_system(k);
      EXPECT_TRUE(dynamics::stability(derive(s, optimum_op(s, xi))).stable) << k << " " << xi;
    }
  }
}

TEST(Optimize, GlobalCheckAgreesWithAnalyticPoint) {
  const auto s = base_system();
  const auto check = optimize::numeric_global_check(s);
  EXPECT_TRUE(check.branch.xi_pinned);
  EXPECT_NEAR(check.branch.delta_over_kappa, 2.0, 0.04);
  EXPECT_NEAR(check.branch.theta, check.theta_analytic, 1e-3);
  EXPECT_LT(rel(check.branch.eta_dc, check.eta_analytic), 0.01);
  // Off the branch the pump margin is the only bound that stays active.
  EXPECT_TRUE(check.free.pump_pinned);
  EXPECT_LE(check.free.eta_dc, check.eta_analytic * (1.0 + 1e-9));
}

TEST(Optimize, SweepPoint) {
  const auto s = base_system();
  const auto row = optimize::sweep_point(s, 0.2 * s.mechanical.omega_m, 2.0, 0.01);
  EXPECT_LT(rel(row.eta_dc_over_sql, 1e-4), 0.01);
  EXPECT_LT(rel(row.detuning, 0.4 * s.mechanical.omega_m), 1e-14);
}

}  // namespace
}  // namespace optoforce
