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

// Velocity debiasing of training chunks: pick the raw chunk length whose
// velocity best matches the velocity model's prediction, then resample that
// chunk to exactly T steps.

#ifndef DEMODEBIAS_DEBIAS_HPP_
#define DEMODEBIAS_DEBIAS_HPP_

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajectory.hpp"
#include "velocity_model.hpp"

namespace demodebias {

struct DebiasConfig {
  int chunk_size = 30;
  double clamp_low = 0.5;
  double clamp_high = 1.5;
  // Dimensions resampled by sample-and-hold instead of interpolation.
  Mask discrete_dims;
  int stride = 1;

  void Validate() const;
  // Search band [round(clamp_low*T), round(clamp_high*T)], halves rounded up.
  int band_low() const;
  int band_high() const;
};

// argmin over L in [band_low, min(band_high, N - t)] of
// |vm_pred - v(a_{t:t+L})|; ties go to the L closest to T, then the smaller
// L. Throws kTooNearEnd when even band_low does not fit.
int SearchChunkLength(const Demonstration& demo, int t, double vm_pred,
                      const DebiasConfig& config,
                      const NormalizationStats& stats);

// Same search over precomputed RowVelocities of the demo.
int SearchChunkLength(const std::vector<double>& row_velocities, int t,
                      double vm_pred, const DebiasConfig& config);

// Linear interpolation of cumulative displacement sampled at T + 1 evenly
// spaced parameters over [0, L]; discrete dims use sample-and-hold. L == T
// returns the source rows unchanged.
Matrix RescaleChunk(const Demonstration& demo, int t, int length, int chunk_size,
                    const Mask& discrete_dims);

struct DebiasedSample {
  Vector observation;
  Matrix actions;  // T x Da
  int chosen_length = 0;
  std::string episode_id;
  int demo_index = 0;
  int t = 0;
  double vm_prediction = 0.0;
};

struct DebiasReport {
  int emitted = 0;
  // Offsets where fewer than band_low steps remain.
  int skipped_too_near_end = 0;
  // Offsets with at least band_low but fewer than T steps remaining; they
  // have no original T-step chunk and are not training samples.
  int skipped_incomplete = 0;
  // Samples where the rescaled chunk matched the prediction worse than the
  // original chunk and the original was emitted instead.
  int reverted_to_original = 0;
  std::map<int, int> length_histogram;
  double velocity_std_before = 0.0;
  double velocity_std_after = 0.0;
  double mean_abs_error_before = 0.0;  // mean |pred - v(a_{t:t+T})|
  double mean_abs_error_after = 0.0;   // mean |pred - v(rescaled)|
};

struct DebiasResult {
  std::vector<DebiasedSample> samples;
  DebiasReport report;
};

// Predicted raw chunk velocity for offset t of a demonstration.
using VelocityPredictor = std::function<double(const Demonstration&, int t)>;

DebiasResult DebiasDataset(const Dataset& dataset,
                           const VelocityPredictor& predict,
                           const DebiasConfig& config,
                           const NormalizationStats& stats);

// Uses model(o_t). Aborts with kConfig / kDimensionMismatch when the model's
// stats or chunk size disagree with the inputs.
DebiasResult DebiasDataset(const Dataset& dataset, const VelocityModel& model,
                           const DebiasConfig& config,
                           const NormalizationStats& stats);

nlohmann::json DebiasedSampleToJson(const DebiasedSample& s);
void WriteDebiasedSamples(std::ostream& out,
                          const std::vector<DebiasedSample>& samples);
nlohmann::json DebiasReportToJson(const DebiasReport& r);

nlohmann::json DebiasConfigToJson(const DebiasConfig& c);
DebiasConfig DebiasConfigFromJson(const nlohmann::json& j, int action_dim);

}  // namespace demodebias

#endif  // DEMODEBIAS_DEBIAS_HPP_
