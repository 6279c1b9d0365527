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

#ifndef OPTOFORCE_ERRORS_HPP_
#define OPTOFORCE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace optoforce {

// Base of every error raised by the library. The command-line tool maps the
// three families below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: unknown key, missing key, both members of
// an either/or pair, value outside its domain.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// The inputs are well formed but describe a point the model rejects
// (non-positive effective detuning, pump above threshold, ...).
class PhysicsError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public PhysicsError {
 public:
  StabilityError(const std::string& message, double pump_ratio)
      : PhysicsError(message), pump_ratio_(pump_ratio) {}

  // alpha^2 / alpha0^2 at the rejected point.
  double pump_ratio() const noexcept { return pump_ratio_; }

 private:
  double pump_ratio_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raised when a response function is evaluated exactly on a pole.
class SingularResponse : public NumericalError {
 public:
  SingularResponse(const std::string& message, double omega)
      : NumericalError(message), omega_(omega) {}

  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

}  // namespace optoforce

#endif  // OPTOFORCE_ERRORS_HPP_
