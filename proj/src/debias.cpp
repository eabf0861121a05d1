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

#include "debias.hpp"

#include <cmath>
#include <ostream>
#include <tuple>

#include "error.hpp"

namespace demodebias {
namespace {

using nlohmann::json;

int RoundHalfUp(double x) { return static_cast<int>(std::floor(x + 0.5)); }

double StdDev(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

bool SameStats(const NormalizationStats& a, const NormalizationStats& b) {
  auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (a.action_min.size() != b.action_min.size()) return false;
  for (Eigen::Index i = 0; i < a.action_min.size(); ++i) {
    if (!close(a.action_min[i], b.action_min[i]) || !close(a.action_max[i], b.action_max[i])) {
      return false;
    }
  }
  return close(a.velocity_min, b.velocity_min) && close(a.velocity_max, b.velocity_max);
}

}  // namespace

void DebiasConfig::Validate() const {
  if (chunk_size < 2) Fail(ErrorCode::kConfig, "chunk_size must be >= 2");
  if (!(clamp_low > 0.0 && clamp_low < 1.0 && clamp_high > 1.0)) {
    Fail(ErrorCode::kConfig, "clamp band must satisfy 0 < low < 1 < high");
  }
  if (stride < 1) Fail(ErrorCode::kConfig, "stride must be >= 1");
  if (band_low() < 1) Fail(ErrorCode::kConfig, "search band lower bound rounds to 0");
}

int DebiasConfig::band_low() const { return RoundHalfUp(clamp_low * chunk_size); }
int DebiasConfig::band_high() const { return RoundHalfUp(clamp_high * chunk_size); }

int SearchChunkLength(const std::vector<double>& row_velocities, int t,
                      double vm_pred, const DebiasConfig& config) {
  if (!std::isfinite(vm_pred)) {
    Fail(ErrorCode::kNonFiniteValue, "velocity prediction is not finite");
  }
  const int n = static_cast<int>(row_velocities.size());
  const int T = config.chunk_size;
  const int lo = config.band_low();
  const int hi = std::min(config.band_high(), n - t);
  if (t < 0 || n - t < lo) {
    Fail(ErrorCode::kTooNearEnd, "offset " + std::to_string(t) + " leaves " +
                                     std::to_string(n - t) + " steps, need " +
                                     std::to_string(lo));
  }
  double v = 0.0;
  for (int k = t; k < t + lo - 1; ++k) v += row_velocities[static_cast<std::size_t>(k)];
  int best = -1;
  std::tuple<double, int, int> best_key;
  for (int length = lo; length <= hi; ++length) {
    v += row_velocities[static_cast<std::size_t>(t + length - 1)];
    const std::tuple<double, int, int> key{std::abs(vm_pred - v), std::abs(length - T), length};
    if (best < 0 || key < best_key) {
      best = length;
      best_key = key;
    }
  }
  return best;
}

int SearchChunkLength(const Demonstration& demo, int t, double vm_pred,
                      const DebiasConfig& config,
                      const NormalizationStats& stats) {
  config.Validate();
  return SearchChunkLength(RowVelocities(demo.actions, demo.eef_mask, stats), t,
                           vm_pred, config);
}

Matrix RescaleChunk(const Demonstration& demo, int t, int length, int chunk_size,
                    const Mask& discrete_dims) {
  if (length < 1) Fail(ErrorCode::kDegenerateLength, "chunk length must be >= 1");
  if (chunk_size < 2) Fail(ErrorCode::kConfig, "chunk_size must be >= 2");
  if (t < 0 || t + length > demo.length()) {
    Fail(ErrorCode::kOutOfRange, "rescale source outside demo");
  }
  const int da = demo.action_dim();
  if (!discrete_dims.empty() && static_cast<int>(discrete_dims.size()) != da) {
    Fail(ErrorCode::kDimensionMismatch, "discrete_dims size differs from action dim");
  }
  const auto src = demo.actions.middleRows(t, length);
  if (length == chunk_size) return src;

  // cumulative[k] = sum of the first k source rows.
  Matrix cumulative = Matrix::Zero(length + 1, da);
  for (int k = 0; k < length; ++k) cumulative.row(k + 1) = cumulative.row(k) + src.row(k);

  // Position at parameter u = num / T, num integral.
  auto position = [&](long num, int dim) {
    const long idx = num / chunk_size;
    const long rem = num % chunk_size;
    double p = cumulative(idx, dim);
    if (rem != 0) p += (static_cast<double>(rem) / chunk_size) * src(idx, dim);
    return p;
  };

  Matrix out(chunk_size, da);
  for (int j = 0; j < chunk_size; ++j) {
    const long a = static_cast<long>(j) * length;
    const long b = static_cast<long>(j + 1) * length;
    for (int dim = 0; dim < da; ++dim) {
      const bool discrete = !discrete_dims.empty() && discrete_dims[static_cast<std::size_t>(dim)];
      out(j, dim) = discrete ? src(a / chunk_size, dim) : position(b, dim) - position(a, dim);
    }
  }
  return out;
}

DebiasResult DebiasDataset(const Dataset& dataset,
                           const VelocityPredictor& predict,
                           const DebiasConfig& config,
                           const NormalizationStats& stats) {
  config.Validate();
  if (dataset.demos.empty()) Fail(ErrorCode::kEmptyDataset, "dataset is empty");
  RequireStats(stats, dataset.action_dim());
  const int T = config.chunk_size;
  const int lo = config.band_low();
  const Mask& mask = dataset.eef_mask();

  DebiasResult result;
  DebiasReport& rep = result.report;
  std::vector<double> v_before, v_after;
  double err_before = 0.0, err_after = 0.0;

  for (std::size_t di = 0; di < dataset.demos.size(); ++di) {
    const Demonstration& demo = dataset.demos[di];
    const int n = demo.length();
    const std::vector<double> rows = RowVelocities(demo.actions, mask, stats);
    for (int t = 0; t < n; t += config.stride) {
      const int remaining = n - t;
      if (remaining < lo) {
        ++rep.skipped_too_near_end;
        continue;
      }
      if (remaining < T) {
        ++rep.skipped_incomplete;
        continue;
      }
      const double pred = predict(demo, t);
      double v_orig = 0.0;
      for (int k = t; k < t + T; ++k) v_orig += rows[static_cast<std::size_t>(k)];

      int length = SearchChunkLength(rows, t, pred, config);
      Matrix actions = RescaleChunk(demo, t, length, T, config.discrete_dims);
      double v_new = VelocityMetric(ActionChunk{t, actions}, mask, stats);
      if (std::abs(pred - v_new) > std::abs(pred - v_orig)) {
        ++rep.reverted_to_original;
        length = T;
        actions = demo.actions.middleRows(t, T);
        v_new = v_orig;
      }

      ++rep.length_histogram[length];
      v_before.push_back(v_orig);
      v_after.push_back(v_new);
      err_before += std::abs(pred - v_orig);
      err_after += std::abs(pred - v_new);

      DebiasedSample s;
      s.observation = demo.observations.row(t).transpose();
      s.actions = std::move(actions);
      s.chosen_length = length;
      s.episode_id = demo.episode_id;
      s.demo_index = static_cast<int>(di);
      s.t = t;
      s.vm_prediction = pred;
      result.samples.push_back(std::move(s));
    }
  }
  rep.emitted = static_cast<int>(result.samples.size());
  rep.velocity_std_before = StdDev(v_before);
  rep.velocity_std_after = StdDev(v_after);
  if (rep.emitted > 0) {
    rep.mean_abs_error_before = err_before / rep.emitted;
    rep.mean_abs_error_after = err_after / rep.emitted;
  }
  return result;
}

DebiasResult DebiasDataset(const Dataset& dataset, const VelocityModel& model,
                           const DebiasConfig& config,
                           const NormalizationStats& stats) {
  RequireStats(stats, dataset.action_dim());
  if (model.chunk_size() != config.chunk_size) {
    Fail(ErrorCode::kConfig, "velocity model was trained for T = " +
                                 std::to_string(model.chunk_size()) + ", debias uses T = " +
                                 std::to_string(config.chunk_size));
  }
  if (!SameStats(model.stats(), stats)) {
    Fail(ErrorCode::kConfig, "velocity model stats differ from dataset stats");
  }
  if (model.extractor().input_dim() != dataset.observation_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "velocity model observation dim mismatch");
  }
  return DebiasDataset(
      dataset,
      [&](const Demonstration& d, int t) {
        return PredictVelocity(model, d.observations.row(t).transpose(), stats);
      },
      config, stats);
}

json DebiasedSampleToJson(const DebiasedSample& s) {
  json obs = json::array();
  for (Eigen::Index i = 0; i < s.observation.size(); ++i) obs.push_back(s.observation[i]);
  json actions = json::array();
  for (Eigen::Index i = 0; i < s.actions.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < s.actions.cols(); ++j) row.push_back(s.actions(i, j));
    actions.push_back(std::move(row));
  }
  return json{{"obs", std::move(obs)},
              {"actions", std::move(actions)},
              {"L", s.chosen_length},
              {"source", json::array({s.episode_id, s.t})},
              {"vm_pred", s.vm_prediction}};
}

void WriteDebiasedSamples(std::ostream& out,
                          const std::vector<DebiasedSample>& samples) {
  for (const DebiasedSample& s : samples) out << DebiasedSampleToJson(s).dump() << '\n';
}

json DebiasReportToJson(const DebiasReport& r) {
  json hist = json::object();
  for (const auto& [length, count] : r.length_histogram) hist[std::to_string(length)] = count;
  return json{{"emitted", r.emitted},
              {"skipped_too_near_end", r.skipped_too_near_end},
              {"skipped_incomplete", r.skipped_incomplete},
              {"reverted_to_original", r.reverted_to_original},
              {"length_histogram", std::move(hist)},
              {"velocity_std_before", r.velocity_std_before},
              {"velocity_std_after", r.velocity_std_after},
              {"mean_abs_error_before", r.mean_abs_error_before},
              {"mean_abs_error_after", r.mean_abs_error_after}};
}

json DebiasConfigToJson(const DebiasConfig& c) {
  json mask = json::array();
  for (bool b : c.discrete_dims) mask.push_back(b);
  return json{{"chunk_size", c.chunk_size},
              {"clamp_low", c.clamp_low},
              {"clamp_high", c.clamp_high},
              {"interpolation", "linear_on_cumulative"},
              {"discrete_dims", std::move(mask)},
              {"stride", c.stride}};
}

DebiasConfig DebiasConfigFromJson(const json& j, int action_dim) {
  DebiasConfig c;
  c.discrete_dims.assign(static_cast<std::size_t>(action_dim), false);
  try {
    if (j.contains("chunk_size")) c.chunk_size = j["chunk_size"].get<int>();
    if (j.contains("clamp_low")) c.clamp_low = j["clamp_low"].get<double>();
    if (j.contains("clamp_high")) c.clamp_high = j["clamp_high"].get<double>();
    if (j.contains("stride")) c.stride = j["stride"].get<int>();
    if (j.contains("interpolation") &&
        j["interpolation"].get<std::string>() != "linear_on_cumulative") {
      Fail(ErrorCode::kConfig, "only linear_on_cumulative interpolation is supported");
    }
    if (j.contains("discrete_dims")) {
      c.discrete_dims.clear();
      for (const json& b : j["discrete_dims"]) c.discrete_dims.push_back(b.get<bool>());
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad debias config: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace demodebias
