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

#include "trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace demodebias {
namespace {

using nlohmann::json;

bool AllFinite(const Matrix& m) { return m.allFinite(); }

// Caller guarantees action stats and mask match `actions`.
std::vector<double> RowL1(const Matrix& actions, const Mask& eef_mask,
                          const NormalizationStats& stats);

Matrix MatrixFromJson(const json& rows, const char* what) {
  if (!rows.is_array()) {
    Fail(ErrorCode::kParse, std::string(what) + " must be an array of rows");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n == 0) return Matrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(rows[0].size());
  Matrix m(n, cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      Fail(ErrorCode::kParse, std::string(what) + ": ragged row " +
                                  std::to_string(i));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorToJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector VectorFromJson(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

void Demonstration::Validate() const {
  const int n = length();
  if (n < 2 || observations.rows() != actions.rows()) {
    Fail(ErrorCode::kInvalidDemonstration,
         "demo '" + episode_id +
             "': observations and actions need equal length >= 2");
  }
  if (static_cast<int>(eef_mask.size()) != action_dim()) {
    Fail(ErrorCode::kInvalidDemonstration,
         "demo '" + episode_id + "': eef_mask size differs from action dim");
  }
  if (std::none_of(eef_mask.begin(), eef_mask.end(), [](bool b) { return b; })) {
    Fail(ErrorCode::kInvalidDemonstration,
         "demo '" + episode_id + "': eef_mask selects no dimension");
  }
  if (!AllFinite(actions) || !AllFinite(observations)) {
    Fail(ErrorCode::kNonFiniteValue,
         "demo '" + episode_id + "' contains non-finite values");
  }
}

int Dataset::action_dim() const {
  return demos.empty() ? 0 : demos.front().action_dim();
}

int Dataset::observation_dim() const {
  return demos.empty() ? 0 : demos.front().observation_dim();
}

const Mask& Dataset::eef_mask() const {
  if (demos.empty()) Fail(ErrorCode::kEmptyDataset, "dataset is empty");
  return demos.front().eef_mask;
}

void Dataset::Validate() const {
  if (demos.empty()) Fail(ErrorCode::kEmptyDataset, "dataset is empty");
  if (chunk_size < 2) Fail(ErrorCode::kConfig, "chunk_size must be >= 2");
  const Demonstration& first = demos.front();
  for (const Demonstration& d : demos) {
    d.Validate();
    if (d.action_dim() != first.action_dim() ||
        d.observation_dim() != first.observation_dim() ||
        d.eef_mask != first.eef_mask) {
      Fail(ErrorCode::kDimensionMismatch,
           "demo '" + d.episode_id + "' differs in dims or eef_mask");
    }
  }
}

void RequireStats(const NormalizationStats& stats, int action_dim) {
  if (!stats.valid()) {
    Fail(ErrorCode::kMissingStats, "normalization stats are missing");
  }
  if (stats.action_min.size() != action_dim) {
    Fail(ErrorCode::kDimensionMismatch,
         "stats have " + std::to_string(stats.action_min.size()) +
             " action dims, expected " + std::to_string(action_dim));
  }
}

NormalizationStats ComputeNormalizationStats(const Dataset& dataset) {
  if (dataset.demos.empty()) {
    Fail(ErrorCode::kEmptyDataset, "cannot compute stats of an empty dataset");
  }
  const int da = dataset.action_dim();
  NormalizationStats stats;
  stats.action_min = Vector::Constant(da, std::numeric_limits<double>::infinity());
  stats.action_max = Vector::Constant(da, -std::numeric_limits<double>::infinity());
  for (const Demonstration& d : dataset.demos) {
    if (d.length() < 1) {
      Fail(ErrorCode::kEmptyDataset, "demo '" + d.episode_id + "' has no steps");
    }
    if (d.action_dim() != da) {
      Fail(ErrorCode::kDimensionMismatch, "demo '" + d.episode_id + "' action dim");
    }
    if (!AllFinite(d.actions)) {
      Fail(ErrorCode::kNonFiniteValue,
           "demo '" + d.episode_id + "' contains non-finite actions");
    }
    stats.action_min = stats.action_min.cwiseMin(d.actions.colwise().minCoeff().transpose());
    stats.action_max = stats.action_max.cwiseMax(d.actions.colwise().maxCoeff().transpose());
  }
  for (int k = 0; k < da; ++k) {
    if (stats.action_max[k] <= stats.action_min[k]) {
      stats.action_max[k] = stats.action_min[k] + kDegenerateEpsilon;
    }
  }

  // Velocity extrema over every length-T chunk at stride 1.
  const int T = dataset.chunk_size;
  const Mask& mask = dataset.eef_mask();
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (const Demonstration& d : dataset.demos) {
    if (d.length() < T) continue;
    const std::vector<double> rows = RowL1(d.actions, mask, stats);
    for (int t = 0; t + T <= d.length(); ++t) {
      double v = 0.0;
      for (int k = t; k < t + T; ++k) v += rows[static_cast<std::size_t>(k)];
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (!std::isfinite(vmin)) {
    Fail(ErrorCode::kChunkTooLong,
         "no demonstration is at least chunk_size = " + std::to_string(T) +
             " steps long");
  }
  stats.velocity_min = vmin;
  stats.velocity_max = vmax > vmin ? vmax : vmin + kDegenerateEpsilon;
  return stats;
}

Matrix NormalizeMatrix(const Matrix& values, const NormalizationStats& stats) {
  RequireStats(stats, static_cast<int>(values.cols()));
  Matrix out(values.rows(), values.cols());
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    const double lo = stats.action_min[j];
    const double span = stats.action_max[j] - lo;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double n = 2.0 * (values(i, j) - lo) / span - 1.0;
      out(i, j) = std::clamp(n, -1.0, 1.0);
    }
  }
  return out;
}

Matrix DenormalizeMatrix(const Matrix& normalized,
                         const NormalizationStats& stats) {
  RequireStats(stats, static_cast<int>(normalized.cols()));
  Matrix out(normalized.rows(), normalized.cols());
  for (Eigen::Index j = 0; j < normalized.cols(); ++j) {
    const double lo = stats.action_min[j];
    const double span = stats.action_max[j] - lo;
    for (Eigen::Index i = 0; i < normalized.rows(); ++i) {
      out(i, j) = lo + 0.5 * (normalized(i, j) + 1.0) * span;
    }
  }
  return out;
}

ActionChunk NormalizeActions(const ActionChunk& chunk,
                             const NormalizationStats& stats) {
  return ActionChunk{chunk.start_index, NormalizeMatrix(chunk.values, stats)};
}

std::vector<double> RowVelocities(const Matrix& actions, const Mask& eef_mask,
                                  const NormalizationStats& stats) {
  RequireStats(stats, static_cast<int>(actions.cols()));
  if (static_cast<Eigen::Index>(eef_mask.size()) != actions.cols()) {
    Fail(ErrorCode::kDimensionMismatch, "eef_mask size differs from action dim");
  }
  return RowL1(actions, eef_mask, stats);
}

namespace {

std::vector<double> RowL1(const Matrix& actions, const Mask& eef_mask,
                          const NormalizationStats& stats) {
  std::vector<double> rows(static_cast<std::size_t>(actions.rows()), 0.0);
  for (Eigen::Index i = 0; i < actions.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < actions.cols(); ++j) {
      if (!eef_mask[static_cast<std::size_t>(j)]) continue;
      const double lo = stats.action_min[j];
      const double span = stats.action_max[j] - lo;
      s += std::abs(std::clamp(2.0 * (actions(i, j) - lo) / span - 1.0, -1.0, 1.0));
    }
    rows[static_cast<std::size_t>(i)] = s;
  }
  return rows;
}

}  // namespace

double VelocityMetric(const ActionChunk& chunk, const Mask& eef_mask,
                      const NormalizationStats& stats) {
  if (chunk.length() < 1) Fail(ErrorCode::kEmptyChunk, "chunk is empty");
  const std::vector<double> rows = RowVelocities(chunk.values, eef_mask, stats);
  double v = 0.0;
  for (double r : rows) v += r;
  return v;
}

ActionChunk ExtractChunk(const Demonstration& demo, int t, int length) {
  if (t < 0 || length < 0 || t + length > demo.length()) {
    Fail(ErrorCode::kOutOfRange,
         "chunk [" + std::to_string(t) + ", " + std::to_string(t + length) +
             ") outside demo of length " + std::to_string(demo.length()));
  }
  return ActionChunk{t, demo.actions.middleRows(t, length)};
}

double NormalizeVelocity(double velocity, const NormalizationStats& stats) {
  if (!(stats.velocity_min < stats.velocity_max)) {
    Fail(ErrorCode::kMissingStats, "velocity stats are missing");
  }
  const double p = (velocity - stats.velocity_min) /
                   (stats.velocity_max - stats.velocity_min);
  return std::clamp(p, 0.0, 1.0);
}

double DenormalizeVelocity(double normalized, const NormalizationStats& stats) {
  if (!(stats.velocity_min < stats.velocity_max)) {
    Fail(ErrorCode::kMissingStats, "velocity stats are missing");
  }
  return stats.velocity_min +
         normalized * (stats.velocity_max - stats.velocity_min);
}

json DemonstrationToJson(const Demonstration& demo) {
  json j;
  j["episode_id"] = demo.episode_id;
  j["task_id"] = demo.task_id;
  j["skills"] = demo.skills;
  json mask = json::array();
  for (bool b : demo.eef_mask) mask.push_back(b);
  j["eef_mask"] = std::move(mask);
  j["observations"] = MatrixToJson(demo.observations);
  j["actions"] = MatrixToJson(demo.actions);
  if (demo.mode_labels) {
    j["mode_labels"] = {{"spatial", demo.mode_labels->spatial},
                        {"velocity", demo.mode_labels->velocity}};
  } else {
    j["mode_labels"] = nullptr;
  }
  return j;
}

Demonstration DemonstrationFromJson(const json& j) {
  try {
    Demonstration d;
    d.episode_id = j.at("episode_id").get<std::string>();
    d.task_id = j.at("task_id").get<std::string>();
    d.skills = j.at("skills").get<std::vector<std::string>>();
    for (const json& b : j.at("eef_mask")) d.eef_mask.push_back(b.get<bool>());
    d.observations = MatrixFromJson(j.at("observations"), "observations");
    d.actions = MatrixFromJson(j.at("actions"), "actions");
    if (j.contains("mode_labels") && !j.at("mode_labels").is_null()) {
      const json& m = j.at("mode_labels");
      d.mode_labels = ModeLabels{m.at("spatial").get<int>(),
                                 m.at("velocity").get<int>()};
    }
    return d;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad demonstration record: ") + e.what());
  }
}

json StatsToJson(const NormalizationStats& stats) {
  return json{{"action_min", VectorToJson(stats.action_min)},
              {"action_max", VectorToJson(stats.action_max)},
              {"velocity_min", stats.velocity_min},
              {"velocity_max", stats.velocity_max}};
}

NormalizationStats StatsFromJson(const json& j) {
  try {
    NormalizationStats s;
    s.action_min = VectorFromJson(j.at("action_min"));
    s.action_max = VectorFromJson(j.at("action_max"));
    s.velocity_min = j.at("velocity_min").get<double>();
    s.velocity_max = j.at("velocity_max").get<double>();
    if ((s.action_min.array() > s.action_max.array()).any() ||
        !(s.velocity_min < s.velocity_max)) {
      Fail(ErrorCode::kParse, "normalization stats violate min <= max");
    }
    return s;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("bad stats object: ") + e.what());
  }
}

void WriteDemonstrations(std::ostream& out,
                         const std::vector<Demonstration>& demos) {
  for (const Demonstration& d : demos) out << DemonstrationToJson(d).dump() << '\n';
}

std::vector<Demonstration> ReadDemonstrations(std::istream& in) {
  std::vector<Demonstration> demos;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorCode::kParse,
           "line " + std::to_string(line_no) + ": " + e.what());
    }
    demos.push_back(DemonstrationFromJson(j));
  }
  return demos;
}

void SaveDataset(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  WriteDemonstrations(out, dataset.demos);
  if (!out) Fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

Dataset LoadDataset(const std::string& path, int chunk_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  Dataset ds;
  ds.demos = ReadDemonstrations(in);
  ds.chunk_size = chunk_size;
  ds.Validate();
  return ds;
}

}  // namespace demodebias
