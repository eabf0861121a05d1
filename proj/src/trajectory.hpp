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

// Demonstration data model, action normalization, chunk extraction and the
// chunk velocity metric.

#ifndef DEMODEBIAS_TRAJECTORY_HPP_
#define DEMODEBIAS_TRAJECTORY_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace demodebias {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Mask = std::vector<bool>;

// Added to max for constant dimensions so they normalize to -1.
inline constexpr double kDegenerateEpsilon = 1e-9;

struct ModeLabels {
  int spatial = 0;
  int velocity = 0;

  bool operator==(const ModeLabels&) const = default;
};

// One expert episode. Row i of `actions` is the relative displacement applied
// after observing row i of `observations`.
struct Demonstration {
  std::string episode_id;
  std::string task_id;
  std::vector<std::string> skills;
  Matrix observations;  // N x Do
  Matrix actions;       // N x Da
  Mask eef_mask;        // Da
  std::optional<ModeLabels> mode_labels;

  int length() const { return static_cast<int>(actions.rows()); }
  int action_dim() const { return static_cast<int>(actions.cols()); }
  int observation_dim() const { return static_cast<int>(observations.cols()); }

  // Throws kInvalidDemonstration / kNonFiniteValue.
  void Validate() const;
};

struct ActionChunk {
  int start_index = 0;
  Matrix values;  // length x Da

  int length() const { return static_cast<int>(values.rows()); }
};

// Per-dimension action extrema and chunk-velocity extrema. A default
// constructed instance is "missing" and rejected by every consumer.
struct NormalizationStats {
  Vector action_min;
  Vector action_max;
  double velocity_min = 0.0;
  double velocity_max = 0.0;

  bool valid() const {
    return action_min.size() > 0 && action_min.size() == action_max.size() &&
           velocity_min < velocity_max;
  }
};

struct Dataset {
  std::vector<Demonstration> demos;
  std::optional<NormalizationStats> stats;
  int chunk_size = 30;

  int action_dim() const;
  int observation_dim() const;
  const Mask& eef_mask() const;

  // Shared Da / eef_mask / chunk_size checks plus per-demo validation.
  void Validate() const;
};

// Throws kMissingStats when stats are absent or do not match `action_dim`.
void RequireStats(const NormalizationStats& stats, int action_dim);

NormalizationStats ComputeNormalizationStats(const Dataset& dataset);

// Per-dimension affine map [min, max] -> [-1, 1] with clamping.
ActionChunk NormalizeActions(const ActionChunk& chunk,
                             const NormalizationStats& stats);
Matrix NormalizeMatrix(const Matrix& values, const NormalizationStats& stats);
Matrix DenormalizeMatrix(const Matrix& normalized,
                         const NormalizationStats& stats);

// L1 norm of the normalized end-effector sub-matrix of `chunk`.
double VelocityMetric(const ActionChunk& chunk, const Mask& eef_mask,
                      const NormalizationStats& stats);

// Per-row contribution to the velocity metric: sum over masked dims of the
// absolute normalized value. Summing rows [t, t+L) in order reproduces
// VelocityMetric of that chunk bit-for-bit.
std::vector<double> RowVelocities(const Matrix& actions, const Mask& eef_mask,
                                  const NormalizationStats& stats);

ActionChunk ExtractChunk(const Demonstration& demo, int t, int length);

// Raw velocity -> [0, 1] (clamped) and back.
double NormalizeVelocity(double velocity, const NormalizationStats& stats);
double DenormalizeVelocity(double normalized, const NormalizationStats& stats);

// ---- Serialization --------------------------------------------------------

nlohmann::json DemonstrationToJson(const Demonstration& demo);
Demonstration DemonstrationFromJson(const nlohmann::json& j);
nlohmann::json StatsToJson(const NormalizationStats& stats);
NormalizationStats StatsFromJson(const nlohmann::json& j);

// JSON Lines: one demonstration per line.
void WriteDemonstrations(std::ostream& out,
                         const std::vector<Demonstration>& demos);
std::vector<Demonstration> ReadDemonstrations(std::istream& in);
void SaveDataset(const std::string& path, const Dataset& dataset);
Dataset LoadDataset(const std::string& path, int chunk_size);

}  // namespace demodebias

#endif  // DEMODEBIAS_TRAJECTORY_HPP_
