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

// Chunk-predicting behaviour-cloning policy.

#ifndef DEMODEBIAS_POLICY_HPP_
#define DEMODEBIAS_POLICY_HPP_

#include <vector>

#include <json.hpp>

#include "mlp.hpp"
#include "trajectory.hpp"
#include "world.hpp"

namespace demodebias {

struct PolicySample {
  Vector observation;
  Matrix chunk;  // T x Da, raw action units
};

struct PolicyTrainConfig {
  std::vector<int> hidden{128, 128};
  Activation activation = Activation::kTanh;
  TrainConfig train{Optimizer::kAdam, 1e-3, 64, 3000, 0.1, 250, 6, 0.0, 0};

  void Validate() const;
};

// MLP from observation to a flattened chunk of normalized actions; outputs
// are denormalized with the stats the policy was trained with.
class PolicyModel : public ChunkPolicy {
 public:
  PolicyModel(Mlp net, NormalizationStats stats, int chunk_size, int action_dim);

  const Mlp& net() const { return net_; }
  const NormalizationStats& stats() const { return stats_; }
  int chunk_size() const { return chunk_size_; }
  int action_dim() const { return action_dim_; }

  Matrix PredictChunk(const Vector& observation) const override;
  // Normalized chunk, T x Da.
  Matrix PredictNormalized(const Vector& observation) const;

  nlohmann::json ToJson() const;
  static PolicyModel FromJson(const nlohmann::json& j);

 private:
  Mlp net_;
  NormalizationStats stats_;
  int chunk_size_;
  int action_dim_;
};

struct PolicyTrainResult {
  PolicyModel model;
  std::vector<CurvePoint> curve;
};

// Regresses normalized chunks on observations with mean squared error.
PolicyTrainResult TrainPolicy(const std::vector<PolicySample>& samples,
                              const NormalizationStats& stats,
                              const PolicyTrainConfig& config);

// (o_t, a_{t:t+T}) for every t with t + T <= N at the given stride.
std::vector<PolicySample> RawChunkSamples(const Dataset& dataset, int chunk_size,
                                          int stride);

nlohmann::json PolicyTrainConfigToJson(const PolicyTrainConfig& c);
PolicyTrainConfig PolicyTrainConfigFromJson(const nlohmann::json& j,
                                            PolicyTrainConfig defaults = {});

}  // namespace demodebias

#endif  // DEMODEBIAS_POLICY_HPP_
