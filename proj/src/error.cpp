// Copyright 2026 The demodebias Authors
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

#include "error.hpp"

namespace demodebias {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kMissingStats: return "MissingStats";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyChunk: return "EmptyChunk";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kInvalidDemonstration: return "InvalidDemonstration";
    case ErrorCode::kInfeasibleWorld: return "InfeasibleWorld";
    case ErrorCode::kInvalidWeights: return "InvalidWeights";
    case ErrorCode::kChunkTooLong: return "ChunkTooLong";
    case ErrorCode::kDivergedLoss: return "DivergedLoss";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kTooNearEnd: return "TooNearEnd";
    case ErrorCode::kDegenerateLength: return "DegenerateLength";
    case ErrorCode::kEmptySelection: return "EmptySelection";
    case ErrorCode::kNoSkillTags: return "NoSkillTags";
    case ErrorCode::kPerfectScoreUnfittable: return "PerfectScoreUnfittable";
    case ErrorCode::kDegenerateX: return "DegenerateX";
    case ErrorCode::kNonPositiveGap: return "NonPositiveGap";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

}  // namespace demodebias
