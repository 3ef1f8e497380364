//
// Copyright 2026 The dplimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dplimit/error.h"

namespace dplimit {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kIndexOutOfRange:
      return "index-out-of-range";
    case ErrorCode::kBudgetExhaustedUndecided:
      return "budget-exhausted-undecided";
    case ErrorCode::kNoTellTale:
      return "family-has-no-telltale";
    case ErrorCode::kOverflow:
      return "overflow";
    case ErrorCode::kEnumerationBudget:
      return "enumeration-budget-exceeded";
    case ErrorCode::kRejectionCap:
      return "rejection-cap-exceeded";
    case ErrorCode::kModelViolation:
      return "model-violation";
    case ErrorCode::kIncompatibleConfig:
      return "incompatible-config";
    case ErrorCode::kIo:
      return "io-error";
  }
  return "unknown";
}

}  // namespace dplimit
