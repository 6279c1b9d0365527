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

#ifndef OPTOFORCE_CAVITY_HPP_
#define OPTOFORCE_CAVITY_HPP_

#include <span>
#include <vector>

#include "optoforce/params.hpp"

// Normal-mode structure of the membrane-in-the-middle cavity.
namespace optoforce::cavity {

// Exact splitting (c/L) arccos(|r_d| cos(2 k x)) on the principal branch.
// Throws PhysicsError when |x| > lambda/8 (= pi/(4k)), beyond which the
// splitting is no longer monotone in |x| and neighbouring orders interfere.
double splitting(double reflectivity, double x, double wavenumber, double length);

struct BranchFrequencies {
  double plus;
  double minus;
};

// omega_c +/- sqrt(f^2 x^2 + g^2)
BranchFrequencies branch_frequencies(double x, double g, double f, double omega_c);

struct ModeStructure {
  std::vector<double> x;            // m
  std::vector<double> splitting;    // rad/s, exact
  std::vector<double> omega_plus;   // rad/s, matched two-mode model
  std::vector<double> omega_minus;  // rad/s
};

ModeStructure sweep(const CavityParams& cav, std::span<const double> displacements);

// Largest displacement accepted by splitting().
double max_displacement(double wavenumber);

}  // namespace optoforce::cavity

#endif  // OPTOFORCE_CAVITY_HPP_
