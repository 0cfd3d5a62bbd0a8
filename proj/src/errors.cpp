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


#include "steinfisher/errors.hpp"

namespace steinfisher {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInCatalog: return "NotInCatalog";
    case ErrorCode::MomentConditionViolated: return "MomentConditionViolated";
    case ErrorCode::NotCentered: return "NotCentered";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DensityUnderflow: return "DensityUnderflow";
    case ErrorCode::NotIntegrable: return "NotIntegrable";
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::GuardDominated: return "GuardDominated";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::MissingKernelDerivativeBound: return "MissingKernelDerivativeBound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace steinfisher
