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

// Velocity model: frozen feature extractor + MLP head regressing the
// min-max normalized velocity of the chunk that follows an observation.

#ifndef DEMODEBIAS_VELOCITY_MODEL_HPP_
#define DEMODEBIAS_VELOCITY_MODEL_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mlp.hpp"
#include "trajectory.hpp"

namespace demodebias {

// Stand-in for a frozen image encoder. Parameters never change after
// construction.
class FeatureExtractor {
 public:
  enum class Kind { kIdentity, kRandomProjection };

  static FeatureExtractor Identity(int input_dim);
  static FeatureExtractor RandomProjection(int input_dim, int output_dim,
                                           std::uint64_t seed);

  Kind kind() const { return kind_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  std::uint64_t seed() const { return seed_; }
  const Matrix& projection() const { return projection_; }

  Vector Extract(const Vector& observation) const;
  Matrix ExtractBatch(const Matrix& observations) const;

  nlohmann::json ToJson() const;
  static FeatureExtractor FromJson(const nlohmann::json& j);

  bool operator==(const FeatureExtractor&) const;

 private:
  FeatureExtractor() = default;

  Kind kind_ = Kind::kIdentity;
  int input_dim_ = 0;
  int output_dim_ = 0;
  std::uint64_t seed_ = 0;
  Matrix projection_;  // input_dim x output_dim
};

struct VmTrainConfig {
  std::vector<int> hidden{64, 64};
  Activation activation = Activation::kTanh;
  int stride = 1;
  TrainConfig train{Optimizer::kSgd, 0.2, 64, 6000, 0.1, 250, 8, 0.0, 0};

  void Validate() const;
};

struct TrainingPairs {
  Matrix features;  // n x feature_dim
  Vector targets;   // n, each in [0, 1]
  std::vector<std::pair<int, int>> source;  // (demo index, t)
};

// One pair per (demo, t) with t + T <= N at the given stride. Throws
// kChunkTooLong when a demo is shorter than T.
TrainingPairs MakeTrainingPairs(const Dataset& dataset, int chunk_size,
                                const NormalizationStats& stats,
                                const FeatureExtractor& extractor, int stride);

class VelocityModel {
 public:
  VelocityModel(FeatureExtractor extractor, Mlp head, NormalizationStats stats,
                int chunk_size);

  const FeatureExtractor& extractor() const { return extractor_; }
  const Mlp& head() const { return head_; }
  const NormalizationStats& stats() const { return stats_; }
  int chunk_size() const { return chunk_size_; }

  // Head output in [0, 1].
  double PredictNormalized(const Vector& observation) const;

  nlohmann::json ToJson() const;
  static VelocityModel FromJson(const nlohmann::json& j);

 private:
  FeatureExtractor extractor_;
  Mlp head_;
  NormalizationStats stats_;
  int chunk_size_;
};

struct VmTrainResult {
  VelocityModel model;
  std::vector<CurvePoint> curve;
};

// Minimizes the mean squared error between head(features) and targets.
VmTrainResult TrainVm(const TrainingPairs& pairs,
                      const FeatureExtractor& extractor,
                      const NormalizationStats& stats, int chunk_size,
                      const VmTrainConfig& config);

// velocity_min + p * (velocity_max - velocity_min).
double PredictVelocity(const VelocityModel& model, const Vector& observation,
                       const NormalizationStats& stats);
double PredictVelocity(const VelocityModel& model, const Vector& observation);

nlohmann::json VmTrainConfigToJson(const VmTrainConfig& c);
// Keys absent from `j` keep their value from `defaults`.
VmTrainConfig VmTrainConfigFromJson(const nlohmann::json& j,
                                    VmTrainConfig defaults = {});

}  // namespace demodebias

#endif  // DEMODEBIAS_VELOCITY_MODEL_HPP_
