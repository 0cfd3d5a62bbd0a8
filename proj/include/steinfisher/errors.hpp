// Copyright 2026 The stein-fisher Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steinfisher {

enum class ErrorCode {
  NotInCatalog,
  MomentConditionViolated,
  NotCentered,
  QuadratureFailure,
  DensityUnderflow,
  NotIntegrable,
  ContractViolation,
  DegenerateVariance,
  GuardDominated,
  InsufficientData,
  InvalidInput,
  InvalidOrder,
  MissingKernelDerivativeBound,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Base of every error thrown by the library. The code is stable and is what
/// the CLI reports in its machine-readable error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(double achieved, double requested)
      : Error(ErrorCode::QuadratureFailure,
              "quadrature did not converge: achieved error " + std::to_string(achieved) +
                  ", requested " + std::to_string(requested)),
        achieved_(achieved) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class GuardDominated : public Error {
 public:
  GuardDominated(double fraction, double estimate)
      : Error(ErrorCode::GuardDominated,
              "guarded fraction " + std::to_string(fraction) + " exceeds 1%"),
        fraction_(fraction),
        estimate_(estimate) {}

  double guarded_fraction() const noexcept { return fraction_; }
  double estimate() const noexcept { return estimate_; }

 private:
  double fraction_;
  double estimate_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(ErrorCode::ConfigError, field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace steinfisher
