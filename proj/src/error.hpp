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

#ifndef DEMODEBIAS_ERROR_HPP_
#define DEMODEBIAS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace demodebias {

enum class ErrorCode {
  kEmptyDataset,
  kNonFiniteValue,
  kMissingStats,
  kDimensionMismatch,
  kEmptyChunk,
  kOutOfRange,
  kInvalidDemonstration,
  kInfeasibleWorld,
  kInvalidWeights,
  kChunkTooLong,
  kDivergedLoss,
  kInsufficientData,
  kTooNearEnd,
  kDegenerateLength,
  kEmptySelection,
  kNoSkillTags,
  kPerfectScoreUnfittable,
  kDegenerateX,
  kNonPositiveGap,
  kConfig,
  kIo,
  kParse,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported as Error; code() identifies the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace demodebias

#endif  // DEMODEBIAS_ERROR_HPP_
