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

#include "policy.hpp"

#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace demodebias {

using nlohmann::json;

void PolicyTrainConfig::Validate() const {
  for (int h : hidden) {
    if (h < 1) Fail(ErrorCode::kConfig, "hidden widths must be positive");
  }
  train.Validate();
}

PolicyModel::PolicyModel(Mlp net, NormalizationStats stats, int chunk_size,
                         int action_dim)
    : net_(std::move(net)),
      stats_(std::move(stats)),
      chunk_size_(chunk_size),
      action_dim_(action_dim) {
  if (net_.output_dim() != chunk_size_ * action_dim_) {
    Fail(ErrorCode::kDimensionMismatch, "policy output is not T x Da");
  }
  RequireStats(stats_, action_dim_);
}

Matrix PolicyModel::PredictNormalized(const Vector& observation) const {
  const Vector flat = net_.Forward(observation);
  return Eigen::Map<const Matrix>(flat.data(), chunk_size_, action_dim_);
}

Matrix PolicyModel::PredictChunk(const Vector& observation) const {
  return DenormalizeMatrix(PredictNormalized(observation), stats_);
}

json PolicyModel::ToJson() const {
  json j = net_.ToJson();
  j["stats"] = StatsToJson(stats_);
  j["chunk_size"] = chunk_size_;
  j["action_dim"] = action_dim_;
  return j;
}

PolicyModel PolicyModel::FromJson(const json& j) {
  try {
    return PolicyModel(Mlp::FromJson(j), StatsFromJson(j.at("stats")),
                       j.at("chunk_size").get<int>(), j.at("action_dim").get<int>());
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad policy: ") + e.what());
  }
}

PolicyTrainResult TrainPolicy(const std::vector<PolicySample>& samples,
                              const NormalizationStats& stats,
                              const PolicyTrainConfig& config) {
  config.Validate();
  if (samples.empty()) Fail(ErrorCode::kInsufficientData, "no policy samples");
  const int obs_dim = static_cast<int>(samples.front().observation.size());
  const int T = static_cast<int>(samples.front().chunk.rows());
  const int da = static_cast<int>(samples.front().chunk.cols());
  RequireStats(stats, da);

  // A single sample is duplicated so the train/validation split has rows.
  const std::size_t n = samples.size() == 1 ? 2 : samples.size();
  Matrix inputs(static_cast<Eigen::Index>(n), obs_dim);
  Matrix targets(static_cast<Eigen::Index>(n), T * da);
  for (std::size_t i = 0; i < n; ++i) {
    const PolicySample& s = samples[i % samples.size()];
    if (s.observation.size() != obs_dim || s.chunk.rows() != T || s.chunk.cols() != da) {
      Fail(ErrorCode::kDimensionMismatch, "policy samples have inconsistent shapes");
    }
    if (!s.chunk.allFinite() || !s.observation.allFinite()) {
      Fail(ErrorCode::kNonFiniteValue, "policy sample contains non-finite values");
    }
    const auto row = static_cast<Eigen::Index>(i);
    inputs.row(row) = s.observation.transpose();
    const Matrix normalized = NormalizeMatrix(s.chunk, stats);
    targets.row(row) = Eigen::Map<const Vector>(normalized.data(), T * da).transpose();
  }
  std::vector<int> widths{obs_dim};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(T * da);
  Mlp net(widths, config.activation, OutputActivation::kLinear,
          DeriveStream(config.train.seed, "policy-net"));
  TrainResult r = TrainRegressor(std::move(net), inputs, targets, config.train);
  if (!r.model.AllFinite()) Fail(ErrorCode::kDivergedLoss, "policy parameters diverged");
  return PolicyTrainResult{PolicyModel(std::move(r.model), stats, T, da), std::move(r.curve)};
}

std::vector<PolicySample> RawChunkSamples(const Dataset& dataset, int chunk_size,
                                          int stride) {
  if (stride < 1) Fail(ErrorCode::kConfig, "stride must be >= 1");
  std::vector<PolicySample> out;
  for (const Demonstration& d : dataset.demos) {
    for (int t = 0; t + chunk_size <= d.length(); t += stride) {
      out.push_back({d.observations.row(t).transpose(), d.actions.middleRows(t, chunk_size)});
    }
  }
  return out;
}

json PolicyTrainConfigToJson(const PolicyTrainConfig& c) {
  return json{{"hidden", c.hidden},
              {"activation", c.activation == Activation::kTanh ? "tanh" : "gelu"},
              {"train", TrainConfigToJson(c.train)}};
}

PolicyTrainConfig PolicyTrainConfigFromJson(const json& j, PolicyTrainConfig defaults) {
  PolicyTrainConfig c = std::move(defaults);
  try {
    if (j.contains("hidden")) c.hidden = j["hidden"].get<std::vector<int>>();
    if (j.contains("activation")) {
      c.activation = j["activation"].get<std::string>() == "gelu" ? Activation::kGelu
                                                                  : Activation::kTanh;
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad policy config: ") + e.what());
  }
  if (j.contains("train")) c.train = TrainConfigFromJson(j["train"], c.train);
  c.Validate();
  return c;
}

}  // namespace demodebias
