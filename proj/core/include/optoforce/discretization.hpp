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

#ifndef OPTOFORCE_DISCRETIZATION_HPP_
#define OPTOFORCE_DISCRETIZATION_HPP_

#include <Eigen/Core>

#include "optoforce/params.hpp"

namespace optoforce::oracle {

using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Vector5d = Eigen::Matrix<double, 5, 1>;
using Diffusion = Eigen::Matrix<double, 5, 3>;

// Linear SDE dz = A z dt + B dW for z = (q, pi, X, Y, I), where (q, pi, X, Y)
// is the scaled state of dynamics::linear_model and I is the running integral
// of the homodyne signal
//   S = sin(theta) (sqrt(2 kappa) X - X_in) + cos(theta) (sqrt(2 kappa) Y - Y_in).
// W = (thermal force, X_in, Y_in) as unit Wiener processes; the inputs
// X_in = dW_X / (sqrt(2) dt) have white spectrum 1/2.
struct AugmentedModel {
  Matrix5d drift;
  Diffusion diffusion;
  double length_scale = 0.0;
  double momentum_scale = 0.0;
};

AugmentedModel augmented_model(const DerivedQuantities& d);

// z_{n+1} = transition z_n + noise_factor n, n ~ N(0, I_5): exact in law for
// any step, from Van Loan's block exponential.
struct ExactDiscretization {
  double step = 0.0;
  Matrix5d transition;
  Matrix5d covariance;
  Matrix5d noise_factor;  // noise_factor noise_factor^T = covariance
};

ExactDiscretization discretize(const AugmentedModel& model, double step);

}  // namespace optoforce::oracle

#endif  // OPTOFORCE_DISCRETIZATION_HPP_
