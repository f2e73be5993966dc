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

#ifndef GRIDCTL_ERROR_HPP_
#define GRIDCTL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gridctl {

// Every failure raised by the library carries one of these codes. The C API
// maps them one to one onto GRIDCTL_ERR_* values.
enum class ErrorCode {
  kInvalidArgument = 1,
  kMalformedCase,
  kDanglingBranch,
  kNonConvexCost,
  kUnknownBus,
  kDomainExceeded,
  kInfeasibleModel,
  kNodeLimitReached,
  kNumericalBreakdown,
  kBudgetExceeded,
  kNotACycle,
  kNotACactus,
  kUnboundedCapacityOnCostlyEdge,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures keep the 1-based line number of the offending input line
// (0 when the problem is not tied to a line, e.g. a missing matrix).
class MalformedCaseError : public Error {
 public:
  MalformedCaseError(int line, const std::string& message)
      : Error(ErrorCode::kMalformedCase,
              line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace gridctl

#endif  // GRIDCTL_ERROR_HPP_
