// Copyright 2026 The gridctl Authors
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

#include "gridctl/error.hpp"

namespace gridctl {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedCase: return "MalformedCase";
    case ErrorCode::kDanglingBranch: return "DanglingBranch";
    case ErrorCode::kNonConvexCost: return "NonConvexCost";
    case ErrorCode::kUnknownBus: return "UnknownBus";
    case ErrorCode::kDomainExceeded: return "DomainExceeded";
    case ErrorCode::kInfeasibleModel: return "InfeasibleModel";
    case ErrorCode::kNodeLimitReached: return "NodeLimitReached";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kNotACycle: return "NotACycle";
    case ErrorCode::kNotACactus: return "NotACactus";
    case ErrorCode::kUnboundedCapacityOnCostlyEdge: return "UnboundedCapacityOnCostlyEdge";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace gridctl
