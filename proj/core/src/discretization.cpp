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

#include "optoforce/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "optoforce/constants.hpp"
#include "optoforce/dynamics.hpp"

namespace optoforce::oracle {

AugmentedModel augmented_model(const DerivedQuantities& d) {
  const dynamics::LinearModel linear = dynamics::linear_model(d);
  AugmentedModel m;
  m.length_scale = linear.length_scale;
  m.momentum_scale = linear.momentum_scale;

  const double s = std::sin(d.theta);
  const double c = std::cos(d.theta);
  const double port = std::sqrt(2.0 * d.kappa);

  m.drift.setZero();
  m.drift.topLeftCorner<4, 4>() = linear.drift;
  m.drift(4, 2) = s * port;
  m.drift(4, 3) = c * port;

  m.diffusion.setZero();
  m.diffusion(1, 0) = std::sqrt(2.0 * d.mass * d.gamma * constants::k_B * d.temperature) /
                      linear.momentum_scale;
  m.diffusion(2, 1) = std::sqrt(d.kappa);
  m.diffusion(3, 2) = std::sqrt(d.kappa);
  m.diffusion(4, 1) = -s / std::numbers::sqrt2;
  m.diffusion(4, 2) = -c / std::numbers::sqrt2;
  return m;
}

ExactDiscretization discretize(const AugmentedModel& model, double step) {
  using Matrix10d = Eigen::Matrix<double, 10, 10>;
  Matrix10d van_loan = Matrix10d::Zero();
  van_loan.topLeftCorner<5, 5>() = -model.drift * step;
  van_loan.topRightCorner<5, 5>() = model.diffusion * model.diffusion.transpose() * step;
  van_loan.bottomRightCorner<5, 5>() = model.drift.transpose() * step;
  const Matrix10d e = van_loan.exp();

  ExactDiscretization out;
  out.step = step;
  out.transition = e.bottomRightCorner<5, 5>().transpose();
  const Matrix5d q = out.transition * e.topRightCorner<5, 5>();
  out.covariance = 0.5 * (q + q.transpose());

  const Eigen::SelfAdjointEigenSolver<Matrix5d> eig(out.covariance);
  const Vector5d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  out.noise_factor = eig.eigenvectors() * roots.asDiagonal();
  return out;
}

}  // namespace optoforce::oracle
