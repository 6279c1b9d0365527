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
#include "optoforce/cavity.hpp"
#include "optoforce/constants.hpp"
#include "optoforce/errors.hpp"

namespace optoforce {
namespace {

using testing::rel;

CavityParams cavity_at(double r) {
  CavityParams cav;
  cav.carrier = Wavelength{1.55e-6};
  cav.subcavity_length = 1e-3;
  cav.loss = Finesse{20000.0};
  cav.reflectivity = r;
  return cav;
}

TEST(Cavity, SplittingAtPointOneNanometre) {
  const auto cav = cavity_at(0.9999);
  const double omega = cavity::splitting(0.9999, 1e-10, cav.wavenumber(), 1e-3);
  EXPECT_LT(rel(omega, 4246701474.583423), 1e-12);
  const auto b = cavity::branch_frequencies(1e-10, coupling_rate(cav), frequency_pull(cav),
                                            cav.omega_c());
  EXPECT_LT(rel(b.plus - b.minus, 4246701474.583443), 1e-9);
}

TEST(Cavity, SplittingAtZeroIsTwiceCoupling) {
  const auto cav = cavity_at(0.9999);
  EXPECT_LT(rel(cavity::splitting(0.9999, 0.0, cav.wavenumber(), 1e-3), 2.0 * coupling_rate(cav)),
            1e-14);
}

TEST(Cavity, MatchedModelWithinOnePermilleNearCrossing) {
  const auto cav = cavity_at(0.9999);
  const double xmax = cav.wavelength() / 100.0;
  std::vector<double> xs;
  for (int i = -200; i <= 200; ++i) xs.push_back(xmax * i / 200.0);
  const auto modes = cavity::sweep(cav, xs);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double matched = modes.omega_plus[i] - modes.omega_minus[i];
    worst = std::max(worst, rel(matched, modes.splitting[i]));
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(Cavity, SplittingIsEvenAndMonotone) {
  const auto cav = cavity_at(0.999);
  const double k = cav.wavenumber();
  const double xmax = cavity::max_displacement(k);
  double previous = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double x = xmax * i / 50.0;
    const double s = cavity::splitting(0.999, x, k, 1e-3);
    EXPECT_DOUBLE_EQ(s, cavity::splitting(0.999, -x, k, 1e-3));
    EXPECT_GT(s, previous);
    previous = s;
  }
}

TEST(Cavity, DisplacementBeyondEighthWavelengthRejected) {
  const auto cav = cavity_at(0.9999);
  const double k = cav.wavenumber();
  EXPECT_NO_THROW(cavity::splitting(0.9999, cavity::max_displacement(k), k, 1e-3));
  EXPECT_THROW(cavity::splitting(0.9999, 1.01 * cav.wavelength() / 8.0, k, 1e-3), PhysicsError);
}

TEST(Cavity, BranchesSymmetricAboutCarrier) {
  const auto b = cavity::branch_frequencies(2e-9, 3e9, -1e18, 1e15);
  EXPECT_DOUBLE_EQ(0.5 * (b.plus + b.minus), 1e15);
  EXPECT_NEAR(b.plus - b.minus, 2.0 * std::hypot(2e9, 3e9), 1e-15 * 1e15);
}

}  // namespace
}  // namespace optoforce
