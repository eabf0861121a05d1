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

#include "velocity_model.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace demodebias {

using nlohmann::json;

FeatureExtractor FeatureExtractor::Identity(int input_dim) {
  FeatureExtractor f;
  f.kind_ = Kind::kIdentity;
  f.input_dim_ = input_dim;
  f.output_dim_ = input_dim;
  return f;
}

FeatureExtractor FeatureExtractor::RandomProjection(int input_dim,
                                                    int output_dim,
                                                    std::uint64_t seed) {
  if (input_dim < 1 || output_dim < 1) {
    Fail(ErrorCode::kConfig, "projection dims must be positive");
  }
  FeatureExtractor f;
  f.kind_ = Kind::kRandomProjection;
  f.input_dim_ = input_dim;
  f.output_dim_ = output_dim;
  f.seed_ = seed;
  f.projection_.resize(input_dim, output_dim);
  Rng rng(DeriveStream(seed, "projection"));
  const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (Eigen::Index i = 0; i < f.projection_.size(); ++i) {
    f.projection_.data()[i] = scale * rng.Normal();
  }
  return f;
}

Vector FeatureExtractor::Extract(const Vector& observation) const {
  if (observation.size() != input_dim_) {
    Fail(ErrorCode::kDimensionMismatch,
         "observation has " + std::to_string(observation.size()) +
             " dims, extractor expects " + std::to_string(input_dim_));
  }
  if (kind_ == Kind::kIdentity) return observation;
  return projection_.transpose() * observation;
}

Matrix FeatureExtractor::ExtractBatch(const Matrix& observations) const {
  if (observations.cols() != input_dim_) {
    Fail(ErrorCode::kDimensionMismatch, "observation batch has wrong width");
  }
  if (kind_ == Kind::kIdentity) return observations;
  return observations * projection_;
}

json FeatureExtractor::ToJson() const {
  if (kind_ == Kind::kIdentity) return json{{"kind", "identity"}, {"dim", input_dim_}};
  return json{{"kind", "random_projection"},
              {"input_dim", input_dim_},
              {"dim", output_dim_},
              {"seed", seed_}};
}

FeatureExtractor FeatureExtractor::FromJson(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return Identity(j.at("dim").get<int>());
    if (kind == "random_projection") {
      return RandomProjection(j.at("input_dim").get<int>(), j.at("dim").get<int>(),
                              j.at("seed").get<std::uint64_t>());
    }
    Fail(ErrorCode::kParse, "unknown extractor kind '" + kind + "'");
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad extractor: ") + e.what());
  }
}

bool FeatureExtractor::operator==(const FeatureExtractor& o) const {
  return kind_ == o.kind_ && input_dim_ == o.input_dim_ &&
         output_dim_ == o.output_dim_ && seed_ == o.seed_ &&
         projection_ == o.projection_;
}

void VmTrainConfig::Validate() const {
  if (stride < 1) Fail(ErrorCode::kConfig, "stride must be >= 1");
  for (int h : hidden) {
    if (h < 1) Fail(ErrorCode::kConfig, "hidden widths must be positive");
  }
  train.Validate();
}

TrainingPairs MakeTrainingPairs(const Dataset& dataset, int chunk_size,
                                const NormalizationStats& stats,
                                const FeatureExtractor& extractor, int stride) {
  if (stride < 1) Fail(ErrorCode::kConfig, "stride must be >= 1");
  if (dataset.demos.empty()) Fail(ErrorCode::kEmptyDataset, "dataset is empty");
  RequireStats(stats, dataset.action_dim());
  const int T = chunk_size;
  std::size_t total = 0;
  for (const Demonstration& d : dataset.demos) {
    if (d.length() < T) {
      Fail(ErrorCode::kChunkTooLong, "demo '" + d.episode_id + "' has " +
                                         std::to_string(d.length()) +
                                         " steps, shorter than T = " + std::to_string(T));
    }
    total += static_cast<std::size_t>((d.length() - T) / stride + 1);
  }
  TrainingPairs pairs;
  pairs.features.resize(static_cast<Eigen::Index>(total), extractor.output_dim());
  pairs.targets.resize(static_cast<Eigen::Index>(total));
  pairs.source.reserve(total);
  Eigen::Index row = 0;
  const Mask& mask = dataset.eef_mask();
  for (std::size_t di = 0; di < dataset.demos.size(); ++di) {
    const Demonstration& d = dataset.demos[di];
    const std::vector<double> rv = RowVelocities(d.actions, mask, stats);
    for (int t = 0; t + T <= d.length(); t += stride) {
      double v = 0.0;
      for (int k = t; k < t + T; ++k) v += rv[static_cast<std::size_t>(k)];
      pairs.features.row(row) = extractor.Extract(d.observations.row(t).transpose()).transpose();
      pairs.targets[row] = NormalizeVelocity(v, stats);
      pairs.source.emplace_back(static_cast<int>(di), t);
      ++row;
    }
  }
  return pairs;
}

VelocityModel::VelocityModel(FeatureExtractor extractor, Mlp head,
                             NormalizationStats stats, int chunk_size)
    : extractor_(std::move(extractor)),
      head_(std::move(head)),
      stats_(std::move(stats)),
      chunk_size_(chunk_size) {
  if (head_.input_dim() != extractor_.output_dim() || head_.output_dim() != 1) {
    Fail(ErrorCode::kDimensionMismatch, "VM head does not match extractor");
  }
  if (head_.output_activation() != OutputActivation::kSigmoid) {
    Fail(ErrorCode::kConfig, "VM head output must be squashed to [0, 1]");
  }
}

double VelocityModel::PredictNormalized(const Vector& observation) const {
  return head_.Forward(extractor_.Extract(observation))[0];
}

json VelocityModel::ToJson() const {
  json j = head_.ToJson();
  j["extractor"] = extractor_.ToJson();
  j["stats"] = StatsToJson(stats_);
  j["chunk_size"] = chunk_size_;
  return j;
}

VelocityModel VelocityModel::FromJson(const json& j) {
  try {
    return VelocityModel(FeatureExtractor::FromJson(j.at("extractor")), Mlp::FromJson(j),
                         StatsFromJson(j.at("stats")), j.at("chunk_size").get<int>());
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad velocity model: ") + e.what());
  }
}

VmTrainResult TrainVm(const TrainingPairs& pairs,
                      const FeatureExtractor& extractor,
                      const NormalizationStats& stats, int chunk_size,
                      const VmTrainConfig& config) {
  config.Validate();
  if (pairs.features.rows() < 2) {
    Fail(ErrorCode::kInsufficientData, "velocity model needs >= 2 training pairs");
  }
  if (pairs.features.cols() != extractor.output_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "pair features do not match extractor");
  }
  std::vector<int> widths{extractor.output_dim()};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(1);
  Mlp head(widths, config.activation, OutputActivation::kSigmoid,
           DeriveStream(config.train.seed, "vm-head"));
  TrainResult r = TrainRegressor(std::move(head), pairs.features,
                                 Matrix(pairs.targets), config.train);
  return VmTrainResult{VelocityModel(extractor, std::move(r.model), stats, chunk_size),
                       std::move(r.curve)};
}

double PredictVelocity(const VelocityModel& model, const Vector& observation,
                       const NormalizationStats& stats) {
  return DenormalizeVelocity(model.PredictNormalized(observation), stats);
}

double PredictVelocity(const VelocityModel& model, const Vector& observation) {
  return PredictVelocity(model, observation, model.stats());
}

json VmTrainConfigToJson(const VmTrainConfig& c) {
  return json{{"hidden", c.hidden},
              {"activation", c.activation == Activation::kTanh ? "tanh" : "gelu"},
              {"stride", c.stride},
              {"train", TrainConfigToJson(c.train)}};
}

VmTrainConfig VmTrainConfigFromJson(const json& j, VmTrainConfig defaults) {
  VmTrainConfig c = std::move(defaults);
  try {
    if (j.contains("hidden")) c.hidden = j["hidden"].get<std::vector<int>>();
    if (j.contains("activation")) {
      c.activation = j["activation"].get<std::string>() == "gelu" ? Activation::kGelu
                                                                  : Activation::kTanh;
    }
    if (j.contains("stride")) c.stride = j["stride"].get<int>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad VM config: ") + e.what());
  }
  if (j.contains("train")) c.train = TrainConfigFromJson(j["train"], c.train);
  c.Validate();
  return c;
}

}  // namespace demodebias
