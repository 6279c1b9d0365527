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

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "fixtures.hpp"
#include "optoforce/discretization.hpp"
#include "optoforce/dynamics.hpp"
#include "optoforce/rng.hpp"

namespace optoforce {
namespace {

using oracle::Matrix5d;
using testing::base_system;
using testing::optimum_op;

TEST(Philox, KnownAnswers) {
  using rng::Philox4x32;
  EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}),
            (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu}),
            (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                 {0xa4093822u, 0x299f31d0u}),
            (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(NormalStream, Moments) {
  rng::NormalStream s(42, 3);
  constexpr int n = 1 << 20;
  double m1 = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.next();
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(NormalStream, StreamsAreReproducibleAndDistinct) {
  rng::NormalStream a(7, 0), b(7, 0), c(7, 1), e(8, 0);
  double corr = 0.0;
  for (int i = 0; i < 4096; ++i) {
    const double x = a.next();
    EXPECT_EQ(x, b.next());
    corr += x * c.next();
    EXPECT_NE(x, e.next());
  }
  EXPECT_LT(std::abs(corr / 4096.0), 0.1);
}

TEST(Discretization, TransitionIsMatrixExponential) {
  const auto d = derive(base_system(), optimum_op(base_system(), 0.01));
  const auto model = oracle::augmented_model(d);
  const double h = 1.0 / (20.0 * d.omega_m);
  const auto step = oracle::discretize(model, h);
  const Matrix5d expected = (model.drift * h).exp();
  EXPECT_LT((step.transition - expected).norm() / expected.norm(), 1e-12);
}

// Covariance by composite Simpson quadrature of e^{As} B B^T e^{A^T s}.
Matrix5d quadrature_covariance(const oracle::AugmentedModel& m, double h) {
  constexpr int n = 2000;
  const Matrix5d q = m.diffusion * m.diffusion.transpose();
  Matrix5d sum = Matrix5d::Zero();
  for (int i = 0; i <= n; ++i) {
    const double s = h * i / n;
    const Matrix5d e = (m.drift * s).exp();
    const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += weight * e * q * e.transpose();
  }
  return sum * h / (3.0 * n);
}

TEST(Discretization, CovarianceMatchesQuadrature) {
  const auto s = base_system(0.2, 1.0);
  const auto d = derive(s, optimum_op(s, 0.05));
  const auto model = oracle::augmented_model(d);
  const double h = 1.0 / (20.0 * d.omega_m);
  const auto step = oracle::discretize(model, h);
  const Matrix5d expected = quadrature_covariance(model, h);
  EXPECT_LT((step.covariance - expected).norm() / expected.norm(), 1e-9);
  const Matrix5d rebuilt = step.noise_factor * step.noise_factor.transpose();
  EXPECT_LT((rebuilt - step.covariance).norm() / step.covariance.norm(), 1e-12);
}

TEST(Discretization, StationaryCovarianceSolvesLyapunov) {
  const auto s = base_system(0.2, 1.0);
  const auto d = derive(s, optimum_op(s, 0.05));
  const auto model = oracle::augmented_model(d);
  const Eigen::Matrix4d a = model.drift.topLeftCorner<4, 4>();
  const Eigen::Matrix4d q =
      (model.diffusion * model.diffusion.transpose()).topLeftCorner<4, 4>();
  // Continuous Lyapunov A P + P A^T + Q = 0 by vectorization.
  const Eigen::Matrix<double, 16, 16> lhs =
      Eigen::kroneckerProduct(Eigen::Matrix4d::Identity(), a) +
      Eigen::kroneckerProduct(a, Eigen::Matrix4d::Identity());
  Eigen::Matrix<double, 16, 1> rhs = -Eigen::Map<const Eigen::Matrix<double, 16, 1>>(q.data());
  const Eigen::Matrix<double, 16, 1> p_vec = lhs.fullPivLu().solve(rhs);
  const Eigen::Matrix4d p = Eigen::Map<const Eigen::Matrix4d>(p_vec.data());

  // Discrete fixed point P = Phi P Phi^T + Sigma, iterated to convergence.
  const auto step = oracle::discretize(model, 1.0 / (20.0 * d.omega_m));
  const Eigen::Matrix4d phi = step.transition.topLeftCorner<4, 4>();
  const Eigen::Matrix4d sigma = step.covariance.topLeftCorner<4, 4>();
  const double residual = (phi * p * phi.transpose() + sigma - p).norm() / p.norm();
  EXPECT_LT(residual, 1e-9);
}

TEST(Discretization, VacuumSignalIntegralIsWhite) {
  // G = 0, T = 0: Var(I(h)) -> h / 2 for a white signal of spectrum 1/2.
  auto s = base_system();
  OperatingPoint op;
  op.pump = PumpAmplitude{0.0};
  op.detuning = EffectiveDetuning{0.4 * s.mechanical.omega_m};
  op.homodyne = HomodyneAngle{0.7};
  const auto d = derive(s, op);
  const auto model = oracle::augmented_model(d);
  for (double h : {1e-9, 1e-7, 1e-5}) {
    // Starting from the stationary cavity state, Var(I) = h/2 exactly.
    Eigen::Matrix<double, 5, 5> p0 = Eigen::Matrix<double, 5, 5>::Zero();
    p0(2, 2) = p0(3, 3) = 0.5;
    const auto step = oracle::discretize(model, h);
    const Matrix5d p1 = step.transition * p0 * step.transition.transpose() + step.covariance;
    EXPECT_NEAR(p1(4, 4) / h, 0.5, 1e-6) << h;
  }
}

}  // namespace
}  // namespace optoforce
