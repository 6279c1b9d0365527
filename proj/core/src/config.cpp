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

#include "optoforce/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "optoforce/constants.hpp"
#include "optoforce/errors.hpp"

namespace optoforce {

namespace {

using nlohmann::json;

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "mass_kg",          "omega_m_rad_s",      "f_m_Hz",
      "gamma_rad_s",      "gamma_Hz",           "Q_m",
      "temperature_K",    "wavelength_m",       "omega_c_rad_s",
      "subcavity_length_m", "finesse",          "kappa_rad_s",
      "kappa_Hz",         "kappa_over_omega_m", "reflectivity",
      "pump_power_W",     "alpha",              "pump",
      "detuning_cavity_rad_s", "detuning_rad_s", "Delta_over_kappa",
      "theta_rad",        "xi",                 "theta_offset_rad",
      "branch",           "efficiency",
  };
  return keys;
}

double number(const json& object, std::string_view key) {
  const auto it = object.find(std::string(key));
  if (it == object.end() || !it->is_number()) throw ConfigError(std::string(key), "expected a number");
  return it->get<double>();
}

double required(const json& object, std::string_view key) {
  if (!object.contains(std::string(key))) throw ConfigError(std::string(key), "required key is missing");
  return number(object, key);
}

// Returns the single key of `group` present in `object`.
template <std::size_t N>
std::string_view exactly_one(const json& object, const std::array<std::string_view, N>& group) {
  std::optional<std::string_view> found;
  for (std::string_view key : group) {
    if (!object.contains(std::string(key))) continue;
    if (found) {
      throw ConfigError(std::string(key), "conflicts with '" + std::string(*found) +
                                              "'; supply exactly one of the pair");
    }
    found = key;
  }
  if (!found) {
    std::string names;
    for (std::string_view key : group) {
      if (!names.empty()) names += " | ";
      names += key;
    }
    throw ConfigError(std::string(group.front()), "required key is missing (one of " + names + ")");
  }
  return *found;
}

const std::vector<std::vector<std::string>>& either_or_groups() {
  static const std::vector<std::vector<std::string>> groups = {
      {"omega_m_rad_s", "f_m_Hz"},
      {"gamma_rad_s", "gamma_Hz", "Q_m"},
      {"wavelength_m", "omega_c_rad_s"},
      {"finesse", "kappa_rad_s", "kappa_Hz", "kappa_over_omega_m"},
      {"pump_power_W", "alpha", "pump"},
      {"detuning_cavity_rad_s", "detuning_rad_s", "Delta_over_kappa"},
      {"theta_rad", "xi", "theta_offset_rad"},
  };
  return groups;
}

}  // namespace

void apply_override(json& object, const std::string& key, json value) {
  if (!object.is_object()) throw ConfigError("", "parameter file must be a JSON object");
  if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  for (const auto& group : either_or_groups()) {
    if (std::find(group.begin(), group.end(), key) == group.end()) continue;
    for (const auto& other : group) {
      if (other != key) object.erase(other);
    }
  }
  object[key] = std::move(value);
}

Config parse_config(const json& object) {
  if (!object.is_object()) throw ConfigError("", "parameter file must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    if (!key.empty() && key.front() == '_') continue;
    if (!known_keys().contains(key)) throw ConfigError(key, "unknown key");
  }

  Config config;
  MechanicalParams& mech = config.system.mechanical;
  CavityParams& cav = config.system.cavity;
  OperatingPoint& op = config.op;

  mech.mass = required(object, "mass_kg");
  const auto wm_key = exactly_one<2>(object, {"omega_m_rad_s", "f_m_Hz"});
  mech.omega_m = wm_key == "f_m_Hz" ? constants::two_pi * number(object, wm_key)
                                    : number(object, wm_key);
  const auto gamma_key = exactly_one<3>(object, {"gamma_rad_s", "gamma_Hz", "Q_m"});
  if (gamma_key == "gamma_rad_s") {
    mech.gamma = number(object, gamma_key);
  } else if (gamma_key == "gamma_Hz") {
    mech.gamma = constants::two_pi * number(object, gamma_key);
  } else {
    const double q = number(object, gamma_key);
    if (!(q > 0.0)) throw ConfigError("Q_m", "must be positive");
    mech.gamma = mech.omega_m / q;
  }
  mech.temperature = required(object, "temperature_K");

  const auto carrier_key = exactly_one<2>(object, {"wavelength_m", "omega_c_rad_s"});
  if (carrier_key == "wavelength_m") {
    cav.carrier = Wavelength{number(object, carrier_key)};
  } else {
    cav.carrier = CarrierFrequency{number(object, carrier_key)};
  }
  cav.subcavity_length = required(object, "subcavity_length_m");
  const auto loss_key =
      exactly_one<4>(object, {"finesse", "kappa_rad_s", "kappa_Hz", "kappa_over_omega_m"});
  if (loss_key == "finesse") {
    cav.loss = Finesse{number(object, loss_key)};
  } else if (loss_key == "kappa_rad_s") {
    cav.loss = Linewidth{number(object, loss_key)};
  } else if (loss_key == "kappa_Hz") {
    cav.loss = Linewidth{constants::two_pi * number(object, loss_key)};
  } else {
    cav.loss = Linewidth{number(object, loss_key) * mech.omega_m};
  }
  cav.reflectivity = required(object, "reflectivity");

  mech.validate();
  cav.validate();

  const auto pump_key = exactly_one<3>(object, {"pump_power_W", "alpha", "pump"});
  if (pump_key == "pump") {
    const auto& value = object.at("pump");
    const std::string rule = value.is_string() ? value.get<std::string>() : std::string();
    if (rule == "optimal") {
      op.pump = OptimalPump{PumpRule::kNearCritical};
    } else if (rule == "optimal_exact") {
      op.pump = OptimalPump{PumpRule::kExact};
    } else {
      throw ConfigError("pump", "expected \"optimal\" or \"optimal_exact\"");
    }
  } else if (pump_key == "alpha") {
    op.pump = PumpAmplitude{number(object, pump_key)};
  } else {
    op.pump = InputPower{number(object, pump_key)};
  }

  const auto detuning_key =
      exactly_one<3>(object, {"detuning_cavity_rad_s", "detuning_rad_s", "Delta_over_kappa"});
  if (detuning_key == "detuning_cavity_rad_s") {
    op.detuning = CavityDetuning{number(object, detuning_key)};
  } else if (detuning_key == "detuning_rad_s") {
    op.detuning = EffectiveDetuning{number(object, detuning_key)};
  } else {
    op.detuning = EffectiveDetuning{number(object, detuning_key) * cav.kappa()};
  }

  const auto homodyne_key = exactly_one<3>(object, {"theta_rad", "xi", "theta_offset_rad"});
  if (homodyne_key == "theta_rad") {
    op.homodyne = HomodyneAngle{number(object, homodyne_key)};
  } else if (homodyne_key == "xi") {
    op.homodyne = CriticalOffset{number(object, homodyne_key)};
  } else {
    // dtheta -> xi needs Delta, which may itself depend on g.
    const double delta_theta = number(object, homodyne_key);
    double detuning = 0.0;
    if (const auto* d = std::get_if<EffectiveDetuning>(&op.detuning)) {
      detuning = d->rad_per_s;
    } else {
      detuning = std::get<CavityDetuning>(op.detuning).rad_per_s + coupling_rate(cav);
    }
    op.homodyne = CriticalOffset{xi_from_offset(delta_theta, cav.kappa(), detuning)};
  }

  if (object.contains("branch")) {
    const auto& value = object.at("branch");
    const std::string branch = value.is_string() ? value.get<std::string>() : std::string();
    if (branch == "upper") {
      op.branch = Branch::kUpper;
    } else if (branch == "lower") {
      op.branch = Branch::kLower;
    } else {
      throw ConfigError("branch", "expected \"upper\" or \"lower\"");
    }
  }
  if (object.contains("efficiency")) {
    op.efficiency = number(object, "efficiency");
    if (!(op.efficiency > 0.0 && op.efficiency <= 1.0)) {
      throw ConfigError("efficiency", "must lie in (0, 1]");
    }
  }
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open parameter file " + path.string());
  json object;
  try {
    object = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
  return parse_config(object);
}

json to_json(const DerivedQuantities& d) {
  return json{
      {"mass_kg", d.mass},
      {"omega_m_rad_s", d.omega_m},
      {"gamma_rad_s", d.gamma},
      {"temperature_K", d.temperature},
      {"omega_c_rad_s", d.omega_c},
      {"kappa_rad_s", d.kappa},
      {"subcavity_length_m", d.subcavity_length},
      {"finesse", d.finesse},
      {"g_rad_s", d.g},
      {"f_rad_s_m", d.f},
      {"detuning_cavity_rad_s", d.detuning_cavity},
      {"detuning_rad_s", d.detuning},
      {"alpha0_sq", d.alpha0_sq},
      {"theta0_rad", d.theta0},
      {"alpha", d.alpha},
      {"alpha_sq", d.alpha_sq},
      {"pump_ratio", d.pump_ratio()},
      {"pump_strength_per_s", d.pump_strength},
      {"input_power_W", d.input_power},
      {"G_rad_s_m", d.G},
      {"theta_rad", d.theta},
      {"delta_theta_rad", d.delta_theta},
      {"xi", d.xi},
      {"efficiency", d.efficiency},
      {"branch", d.branch == Branch::kUpper ? "upper" : "lower"},
      {"n_th", d.n_th},
      {"Q_m", d.Q_m},
      {"Q_c", d.Q_c},
  };
}

}  // namespace optoforce
