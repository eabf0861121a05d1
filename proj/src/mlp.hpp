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

// Small fully connected regressor with analytic gradients and a minibatch
// trainer that keeps the best-validation parameters.

#ifndef DEMODEBIAS_MLP_HPP_
#define DEMODEBIAS_MLP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rng.hpp"
#include "trajectory.hpp"

namespace demodebias {

enum class Activation { kTanh, kGelu };
enum class OutputActivation { kLinear, kSigmoid };

class Mlp {
 public:
  Mlp() = default;
  // widths = [in, h1, ..., out].
  Mlp(std::vector<int> widths, Activation hidden, OutputActivation output,
      std::uint64_t seed);

  const std::vector<int>& widths() const { return widths_; }
  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  Activation hidden_activation() const { return hidden_; }
  OutputActivation output_activation() const { return output_; }

  // Per-feature standardization applied before the first layer.
  void SetInputStandardization(const Vector& mean, const Vector& scale);
  void FitInputStandardization(const Matrix& inputs);

  // inputs: batch x in -> batch x out.
  Matrix Forward(const Matrix& inputs) const;
  Vector Forward(const Vector& input) const;

  // Mean over all batch x out elements of the squared error, and its
  // gradient w.r.t. Parameters(). When dropout > 0 inverted dropout is
  // applied to hidden activations using `rng`.
  double LossAndGradient(const Matrix& inputs, const Matrix& targets,
                         Vector* gradient, double dropout = 0.0,
                         Rng* rng = nullptr) const;

  double Loss(const Matrix& inputs, const Matrix& targets) const;

  int num_parameters() const;
  Vector Parameters() const;
  void SetParameters(const Vector& flat);
  bool AllFinite() const;

  nlohmann::json ToJson() const;
  static Mlp FromJson(const nlohmann::json& j);

  bool operator==(const Mlp& other) const;

 private:
  std::vector<int> widths_;
  Activation hidden_ = Activation::kTanh;
  OutputActivation output_ = OutputActivation::kLinear;
  std::vector<Matrix> weights_;  // layer l: widths[l] x widths[l+1]
  std::vector<Vector> biases_;
  Vector input_mean_;
  Vector input_scale_;
};

enum class Optimizer { kSgd, kAdam };

struct TrainConfig {
  Optimizer optimizer = Optimizer::kSgd;
  double learning_rate = 0.05;
  int batch_size = 64;
  int max_steps = 4000;
  double validation_fraction = 0.1;
  int eval_every = 200;
  // Evaluations without validation improvement before stopping.
  int patience = 10;
  double dropout = 0.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct CurvePoint {
  int step = 0;
  double train_mse = 0.0;
  double val_mse = 0.0;
};

struct TrainResult {
  Mlp model;
  std::vector<CurvePoint> curve;
  double best_val_mse = 0.0;
  int best_step = 0;
};

// Splits rows into train/validation by seed, fits input standardization on
// the training rows, and runs minibatch gradient descent. Throws
// kInsufficientData (< 2 rows) and kDivergedLoss (non-finite loss).
TrainResult TrainRegressor(Mlp init, const Matrix& inputs,
                           const Matrix& targets, const TrainConfig& config);

nlohmann::json TrainConfigToJson(const TrainConfig& c);
TrainConfig TrainConfigFromJson(const nlohmann::json& j, TrainConfig defaults);

}  // namespace demodebias

#endif  // DEMODEBIAS_MLP_HPP_
