// Copyright 2026 The iaood Authors.
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

#ifndef IAOOD_ERROR_H_
#define IAOOD_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace iaood {

enum class ErrorCode {
  kBadMagic,
  kTruncatedFile,
  kTrailingBytes,
  kDtypeMismatch,
  kInvalidDims,
  kIoFailure,
  kDimensionMismatch,
  kUnknownInstanceId,
  kInvalidDistribution,
  kEmptySampleList,
  kTooManyInstances,
  kDegeneratePopulation,
  kPlacementOverflow,
  kMissingSample,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception. The code is stable and is
// what callers (and the CLI exit-code mapping) branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iaood

#endif  // IAOOD_ERROR_H_
