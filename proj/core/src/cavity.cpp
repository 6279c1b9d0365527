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

#include "optoforce/cavity.hpp"

#include <cmath>
#include <string>

#include "optoforce/constants.hpp"
#include "optoforce/errors.hpp"

namespace optoforce::cavity {

double max_displacement(double wavenumber) { return constants::pi / (4.0 * wavenumber); }

double splitting(double reflectivity, double x, double wavenumber, double length) {
  if (std::abs(x) > max_displacement(wavenumber)) {
    throw PhysicsError("displacement " + std::to_string(x) +
                       " m exceeds lambda/8; the linearized splitting is not valid there");
  }
  return constants::c_light / length * std::acos(reflectivity * std::cos(2.0 * wavenumber * x));
}

BranchFrequencies branch_frequencies(double x, double g, double f, double omega_c) {
  const double half = std::hypot(f * x, g);
  return {omega_c + half, omega_c - half};
}

ModeStructure sweep(const CavityParams& cav, std::span<const double> displacements) {
  cav.validate();
  const double k = cav.wavenumber();
  const double g = coupling_rate(cav);
  const double f = frequency_pull(cav);
  const double omega_c = cav.omega_c();

  ModeStructure modes;
  modes.x.reserve(displacements.size());
  modes.splitting.reserve(displacements.size());
  modes.omega_plus.reserve(displacements.size());
  modes.omega_minus.reserve(displacements.size());
  for (double x : displacements) {
    const auto branches = branch_frequencies(x, g, f, omega_c);
    modes.x.push_back(x);
    modes.splitting.push_back(splitting(cav.reflectivity, x, k, cav.subcavity_length));
    modes.omega_plus.push_back(branches.plus);
    modes.omega_minus.push_back(branches.minus);
  }
  return modes;
}

}  // namespace optoforce::cavity
