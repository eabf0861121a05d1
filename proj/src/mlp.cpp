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

#include "mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "error.hpp"

namespace demodebias {
namespace {

using nlohmann::json;

double Gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double GeluDerivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

Matrix ApplyHidden(Activation a, const Matrix& z) {
  if (a == Activation::kTanh) return z.array().tanh().matrix();
  return z.unaryExpr([](double x) { return Gelu(x); });
}

Matrix HiddenDerivative(Activation a, const Matrix& z, const Matrix& act) {
  if (a == Activation::kTanh) return (1.0 - act.array().square()).matrix();
  return z.unaryExpr([](double x) { return GeluDerivative(x); });
}

Matrix GatherRows(const Matrix& m, const std::vector<int>& idx, std::size_t begin,
                  std::size_t count) {
  Matrix out(static_cast<Eigen::Index>(count), m.cols());
  for (std::size_t i = 0; i < count; ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(idx[begin + i]);
  return out;
}

const char* ActivationName(Activation a) { return a == Activation::kTanh ? "tanh" : "gelu"; }
const char* OutputName(OutputActivation a) {
  return a == OutputActivation::kLinear ? "linear" : "sigmoid";
}

json MatrixJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector VectorOf(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

}  // namespace

Mlp::Mlp(std::vector<int> widths, Activation hidden, OutputActivation output,
         std::uint64_t seed)
    : widths_(std::move(widths)), hidden_(hidden), output_(output) {
  if (widths_.size() < 2 ||
      std::any_of(widths_.begin(), widths_.end(), [](int w) { return w < 1; })) {
    Fail(ErrorCode::kConfig, "MLP widths must have >= 2 positive entries");
  }
  Rng rng(DeriveStream(seed, "mlp-init"));
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    const int fan_in = widths_[l];
    const bool last = l + 2 == widths_.size();
    const double scale = (last ? 0.5 : 1.0) / std::sqrt(static_cast<double>(fan_in));
    Matrix w(fan_in, widths_[l + 1]);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = scale * rng.Normal();
    weights_.push_back(std::move(w));
    biases_.push_back(Vector::Zero(widths_[l + 1]));
  }
  input_mean_ = Vector::Zero(widths_.front());
  input_scale_ = Vector::Ones(widths_.front());
}

void Mlp::SetInputStandardization(const Vector& mean, const Vector& scale) {
  if (mean.size() != input_dim() || scale.size() != input_dim() ||
      (scale.array() <= 0.0).any()) {
    Fail(ErrorCode::kDimensionMismatch, "bad input standardization");
  }
  input_mean_ = mean;
  input_scale_ = scale;
}

void Mlp::FitInputStandardization(const Matrix& inputs) {
  if (inputs.cols() != input_dim() || inputs.rows() == 0) {
    Fail(ErrorCode::kDimensionMismatch, "inputs do not match MLP input dim");
  }
  const Vector mean = inputs.colwise().mean().transpose();
  Vector scale(input_dim());
  for (int j = 0; j < input_dim(); ++j) {
    const double var = (inputs.col(j).array() - mean[j]).square().mean();
    const double sd = std::sqrt(var);
    scale[j] = sd > 1e-6 ? sd : 1.0;
  }
  SetInputStandardization(mean, scale);
}

Matrix Mlp::Forward(const Matrix& inputs) const {
  if (inputs.cols() != input_dim()) {
    Fail(ErrorCode::kDimensionMismatch,
         "input has " + std::to_string(inputs.cols()) + " features, expected " +
             std::to_string(input_dim()));
  }
  Matrix a = (inputs.rowwise() - input_mean_.transpose()).array().rowwise() /
             input_scale_.transpose().array();
  const std::size_t layers = weights_.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = a * weights_[l];
    z.rowwise() += biases_[l].transpose();
    if (l + 1 < layers) {
      a = ApplyHidden(hidden_, z);
    } else if (output_ == OutputActivation::kSigmoid) {
      a = (1.0 / (1.0 + (-z.array()).exp())).matrix();
    } else {
      a = std::move(z);
    }
  }
  return a;
}

Vector Mlp::Forward(const Vector& input) const {
  Matrix row = input.transpose();
  return Forward(row).row(0).transpose();
}

double Mlp::LossAndGradient(const Matrix& inputs, const Matrix& targets,
                            Vector* gradient, double dropout, Rng* rng) const {
  if (inputs.rows() != targets.rows() || targets.cols() != output_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "targets do not match MLP output");
  }
  if (inputs.cols() != input_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "inputs do not match MLP input dim");
  }
  const std::size_t layers = weights_.size();
  std::vector<Matrix> acts;   // acts[l] = input to layer l (after dropout)
  std::vector<Matrix> zs;
  std::vector<Matrix> masks;  // dropout masks per hidden layer
  acts.reserve(layers + 1);
  acts.push_back((inputs.rowwise() - input_mean_.transpose()).array().rowwise() /
                 input_scale_.transpose().array());
  const bool use_dropout = dropout > 0.0 && rng != nullptr;
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = acts.back() * weights_[l];
    z.rowwise() += biases_[l].transpose();
    Matrix a;
    if (l + 1 < layers) {
      a = ApplyHidden(hidden_, z);
      if (use_dropout) {
        Matrix mask(a.rows(), a.cols());
        for (Eigen::Index i = 0; i < mask.size(); ++i) {
          mask.data()[i] = rng->Uniform() < dropout ? 0.0 : 1.0 / (1.0 - dropout);
        }
        masks.push_back(mask);
      }
    } else if (output_ == OutputActivation::kSigmoid) {
      a = (1.0 / (1.0 + (-z.array()).exp())).matrix();
    } else {
      a = z;
    }
    zs.push_back(std::move(z));
    if (l + 1 < layers && use_dropout) {
      acts.push_back(a.cwiseProduct(masks.back()));
    } else {
      acts.push_back(std::move(a));
    }
  }
  const Matrix& y = acts.back();
  const Matrix diff = y - targets;
  const double denom = static_cast<double>(diff.size());
  const double loss = diff.squaredNorm() / denom;
  if (gradient == nullptr) return loss;

  gradient->resize(num_parameters());
  Matrix delta = (2.0 / denom) * diff;
  if (output_ == OutputActivation::kSigmoid) {
    delta = delta.cwiseProduct((y.array() * (1.0 - y.array())).matrix());
  }
  // Parameter offsets per layer.
  std::vector<Eigen::Index> offset(layers);
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offset[l] = off;
    off += weights_[l].size() + biases_[l].size();
  }
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix gw = acts[l].transpose() * delta;
    const Vector gb = delta.colwise().sum().transpose();
    Eigen::Map<Matrix>(gradient->data() + offset[l], gw.rows(), gw.cols()) = gw;
    gradient->segment(offset[l] + gw.size(), gb.size()) = gb;
    if (l == 0) break;
    Matrix da = delta * weights_[l].transpose();
    const std::size_t hidden_index = l - 1;
    if (use_dropout) da = da.cwiseProduct(masks[hidden_index]);
    Matrix act_plain = use_dropout ? ApplyHidden(hidden_, zs[hidden_index])
                                   : acts[l];
    delta = da.cwiseProduct(HiddenDerivative(hidden_, zs[hidden_index], act_plain));
  }
  return loss;
}

double Mlp::Loss(const Matrix& inputs, const Matrix& targets) const {
  return (Forward(inputs) - targets).squaredNorm() / static_cast<double>(targets.size());
}

int Mlp::num_parameters() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return static_cast<int>(n);
}

Vector Mlp::Parameters() const {
  Vector flat(num_parameters());
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    flat.segment(off, weights_[l].size()) =
        Eigen::Map<const Vector>(weights_[l].data(), weights_[l].size());
    off += weights_[l].size();
    flat.segment(off, biases_[l].size()) = biases_[l];
    off += biases_[l].size();
  }
  return flat;
}

void Mlp::SetParameters(const Vector& flat) {
  if (flat.size() != num_parameters()) {
    Fail(ErrorCode::kDimensionMismatch, "parameter vector size mismatch");
  }
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::Map<Vector>(weights_[l].data(), weights_[l].size()) =
        flat.segment(off, weights_[l].size());
    off += weights_[l].size();
    biases_[l] = flat.segment(off, biases_[l].size());
    off += biases_[l].size();
  }
}

bool Mlp::AllFinite() const {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

json Mlp::ToJson() const {
  json weights = json::array();
  json biases = json::array();
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights.push_back(MatrixJson(weights_[l]));
    biases.push_back(VectorJson(biases_[l]));
  }
  return json{{"widths", widths_},
              {"activation", ActivationName(hidden_)},
              {"output", OutputName(output_)},
              {"input_mean", VectorJson(input_mean_)},
              {"input_scale", VectorJson(input_scale_)},
              {"weights", std::move(weights)},
              {"biases", std::move(biases)}};
}

Mlp Mlp::FromJson(const json& j) {
  try {
    const auto widths = j.at("widths").get<std::vector<int>>();
    const std::string act = j.value("activation", "tanh");
    const std::string out = j.value("output", "linear");
    Mlp m(widths, act == "gelu" ? Activation::kGelu : Activation::kTanh,
          out == "sigmoid" ? OutputActivation::kSigmoid : OutputActivation::kLinear, 0);
    const json& w = j.at("weights");
    const json& b = j.at("biases");
    if (w.size() != m.weights_.size() || b.size() != m.biases_.size()) {
      Fail(ErrorCode::kParse, "layer count does not match widths");
    }
    for (std::size_t l = 0; l < m.weights_.size(); ++l) {
      Matrix& wl = m.weights_[l];
      if (w[l].size() != static_cast<std::size_t>(wl.rows())) {
        Fail(ErrorCode::kParse, "weight shape does not match widths");
      }
      for (Eigen::Index r = 0; r < wl.rows(); ++r) {
        const json& row = w[l][static_cast<std::size_t>(r)];
        if (row.size() != static_cast<std::size_t>(wl.cols())) {
          Fail(ErrorCode::kParse, "weight shape does not match widths");
        }
        for (Eigen::Index c = 0; c < wl.cols(); ++c) wl(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
      m.biases_[l] = VectorOf(b[l]);
      if (m.biases_[l].size() != wl.cols()) Fail(ErrorCode::kParse, "bias shape mismatch");
    }
    m.SetInputStandardization(VectorOf(j.at("input_mean")), VectorOf(j.at("input_scale")));
    return m;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad MLP object: ") + e.what());
  }
}

bool Mlp::operator==(const Mlp& o) const {
  if (widths_ != o.widths_ || hidden_ != o.hidden_ || output_ != o.output_) return false;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (weights_[l] != o.weights_[l] || biases_[l] != o.biases_[l]) return false;
  }
  return input_mean_ == o.input_mean_ && input_scale_ == o.input_scale_;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || batch_size < 1 || max_steps < 1 || eval_every < 1 ||
      patience < 1) {
    Fail(ErrorCode::kConfig, "training hyperparameters must be positive");
  }
  if (!(validation_fraction > 0.0 && validation_fraction <= 0.5)) {
    Fail(ErrorCode::kConfig, "validation_fraction must lie in (0, 0.5]");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    Fail(ErrorCode::kConfig, "dropout must lie in [0, 1)");
  }
}

TrainResult TrainRegressor(Mlp init, const Matrix& inputs,
                           const Matrix& targets, const TrainConfig& config) {
  config.Validate();
  const auto n = static_cast<int>(inputs.rows());
  if (n < 2 || targets.rows() != n) {
    Fail(ErrorCode::kInsufficientData,
         "need >= 2 training rows, got " + std::to_string(n));
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(DeriveStream(config.seed, "split"));
  split_rng.Shuffle(order.begin(), order.end());
  const int n_val = std::clamp(
      static_cast<int>(std::ceil(config.validation_fraction * n)), 1, n - 1);
  std::vector<int> val_idx(order.begin(), order.begin() + n_val);
  std::vector<int> train_idx(order.begin() + n_val, order.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  const Matrix train_x = GatherRows(inputs, train_idx, 0, train_idx.size());
  const Matrix train_y = GatherRows(targets, train_idx, 0, train_idx.size());
  const Matrix val_x = GatherRows(inputs, val_idx, 0, val_idx.size());
  const Matrix val_y = GatherRows(targets, val_idx, 0, val_idx.size());

  Mlp model = std::move(init);
  model.FitInputStandardization(train_x);

  TrainResult result;
  auto evaluate = [&](int step) {
    const CurvePoint p{step, model.Loss(train_x, train_y), model.Loss(val_x, val_y)};
    if (!std::isfinite(p.train_mse) || !std::isfinite(p.val_mse)) {
      Fail(ErrorCode::kDivergedLoss, "loss became non-finite at step " + std::to_string(step));
    }
    result.curve.push_back(p);
    return p;
  };

  CurvePoint first = evaluate(0);
  result.model = model;
  result.best_val_mse = first.val_mse;
  result.best_step = 0;

  Vector params = model.Parameters();
  Vector grad;
  Vector adam_m = Vector::Zero(params.size());
  Vector adam_v = Vector::Zero(params.size());
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

  Rng batch_rng(DeriveStream(config.seed, "batches"));
  Rng dropout_rng(DeriveStream(config.seed, "dropout"));
  std::vector<int> epoch(train_idx.size());
  std::iota(epoch.begin(), epoch.end(), 0);
  std::size_t cursor = epoch.size();
  const std::size_t batch =
      std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), epoch.size());
  int since_best = 0;

  for (int step = 1; step <= config.max_steps; ++step) {
    if (cursor + batch > epoch.size()) {
      batch_rng.Shuffle(epoch.begin(), epoch.end());
      cursor = 0;
    }
    const Matrix bx = GatherRows(train_x, epoch, cursor, batch);
    const Matrix by = GatherRows(train_y, epoch, cursor, batch);
    cursor += batch;
    const double loss = model.LossAndGradient(bx, by, &grad, config.dropout,
                                              config.dropout > 0.0 ? &dropout_rng : nullptr);
    if (!std::isfinite(loss) || !grad.allFinite()) {
      Fail(ErrorCode::kDivergedLoss, "minibatch loss became non-finite at step " +
                                         std::to_string(step));
    }
    if (config.optimizer == Optimizer::kSgd) {
      params -= config.learning_rate * grad;
    } else {
      adam_m = kBeta1 * adam_m + (1.0 - kBeta1) * grad;
      adam_v = kBeta2 * adam_v + (1.0 - kBeta2) * grad.cwiseAbs2();
      const double c1 = 1.0 - std::pow(kBeta1, step);
      const double c2 = 1.0 - std::pow(kBeta2, step);
      params.array() -= config.learning_rate * (adam_m.array() / c1) /
                        ((adam_v.array() / c2).sqrt() + kAdamEps);
    }
    model.SetParameters(params);

    if (step % config.eval_every == 0 || step == config.max_steps) {
      const CurvePoint p = evaluate(step);
      if (p.val_mse < result.best_val_mse) {
        result.best_val_mse = p.val_mse;
        result.best_step = step;
        result.model = model;
        since_best = 0;
      } else if (++since_best >= config.patience) {
        break;
      }
    }
  }
  return result;
}

json TrainConfigToJson(const TrainConfig& c) {
  return json{{"optimizer", c.optimizer == Optimizer::kSgd ? "sgd" : "adam"},
              {"learning_rate", c.learning_rate},
              {"batch_size", c.batch_size},
              {"max_steps", c.max_steps},
              {"validation_fraction", c.validation_fraction},
              {"eval_every", c.eval_every},
              {"patience", c.patience},
              {"dropout", c.dropout},
              {"seed", c.seed}};
}

TrainConfig TrainConfigFromJson(const json& j, TrainConfig c) {
  try {
    if (j.contains("optimizer")) {
      const std::string o = j["optimizer"].get<std::string>();
      if (o == "sgd") c.optimizer = Optimizer::kSgd;
      else if (o == "adam") c.optimizer = Optimizer::kAdam;
      else Fail(ErrorCode::kConfig, "optimizer must be sgd or adam");
    }
    if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("batch_size")) c.batch_size = j["batch_size"].get<int>();
    if (j.contains("max_steps")) c.max_steps = j["max_steps"].get<int>();
    if (j.contains("validation_fraction")) c.validation_fraction = j["validation_fraction"].get<double>();
    if (j.contains("eval_every")) c.eval_every = j["eval_every"].get<int>();
    if (j.contains("patience")) c.patience = j["patience"].get<int>();
    if (j.contains("dropout")) c.dropout = j["dropout"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad train config: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace demodebias
