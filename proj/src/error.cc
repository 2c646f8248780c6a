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

#include "iaood/error.h"

namespace iaood {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kTrailingBytes: return "TrailingBytes";
    case ErrorCode::kDtypeMismatch: return "DtypeMismatch";
    case ErrorCode::kInvalidDims: return "InvalidDims";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownInstanceId: return "UnknownInstanceId";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kEmptySampleList: return "EmptySampleList";
    case ErrorCode::kTooManyInstances: return "TooManyInstances";
    case ErrorCode::kDegeneratePopulation: return "DegeneratePopulation";
    case ErrorCode::kPlacementOverflow: return "PlacementOverflow";
    case ErrorCode::kMissingSample: return "MissingSample";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace iaood
