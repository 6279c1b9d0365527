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

#ifndef OPTOFORCE_CONFIG_HPP_
#define OPTOFORCE_CONFIG_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "optoforce/params.hpp"

namespace optoforce {

// Parameter file: one flat JSON object with unit-suffixed keys.
//
//   mass_kg                                        required
//   omega_m_rad_s | f_m_Hz                         exactly one
//   gamma_rad_s | gamma_Hz | Q_m                   exactly one
//   temperature_K                                  required
//   wavelength_m | omega_c_rad_s                   exactly one
//   subcavity_length_m                             required
//   finesse | kappa_rad_s | kappa_Hz | kappa_over_omega_m   exactly one
//   reflectivity                                   required, |r_d|
//   pump_power_W | alpha | pump                    exactly one; pump is
//                                                  "optimal" or "optimal_exact"
//   detuning_cavity_rad_s | detuning_rad_s | Delta_over_kappa   exactly one
//   theta_rad | xi | theta_offset_rad              exactly one
//   branch                                         optional, "upper" | "lower"
//   efficiency                                     optional, default 1
//
// Keys starting with '_' are ignored. Any other key is rejected.
struct Config {
  SystemParams system;
  OperatingPoint op;
};

// Throws ConfigError naming the offending key.
Config parse_config(const nlohmann::json& object);
Config load_config(const std::filesystem::path& path);

// Set `key`, dropping the other members of its either/or group so a
// command-line value replaces a file value instead of conflicting with it.
void apply_override(nlohmann::json& object, const std::string& key, nlohmann::json value);

nlohmann::json to_json(const DerivedQuantities& d);

}  // namespace optoforce

#endif  // OPTOFORCE_CONFIG_HPP_
