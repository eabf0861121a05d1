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

// extern "C" wrappers. Exceptions never cross this boundary.

#include "demodebias/demodebias.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include <json.hpp>

#include "debias.hpp"
#include "error.hpp"
#include "pipeline.hpp"
#include "policy.hpp"
#include "scaling.hpp"
#include "trajectory.hpp"
#include "velocity_model.hpp"
#include "world.hpp"

struct dd_dataset {
  demodebias::Dataset dataset;
};
struct dd_stats {
  demodebias::NormalizationStats stats;
};
struct dd_velocity_model {
  demodebias::VelocityModel model;
};
struct dd_policy {
  demodebias::PolicyModel policy;
};

namespace {

using demodebias::Error;
using demodebias::ErrorCode;
using nlohmann::json;

static_assert(static_cast<int>(ErrorCode::kParse) + 1 == DD_ERR_PARSE,
              "dd_status must mirror ErrorCode");

thread_local std::string g_last_error;
thread_local std::string g_last_error_json = "{}";

dd_status ToStatus(ErrorCode code) { return static_cast<dd_status>(static_cast<int>(code) + 1); }

void SetError(dd_status status, ErrorCode code, const std::string& message,
              const std::string& stage) {
  g_last_error = message;
  json j = demodebias::ErrorToJson(code, message, stage);
  j["error"]["exit_code"] = dd_exit_code(status);
  g_last_error_json = j.dump();
}

struct InvalidArgument {
  const char* message;
};

template <typename F>
dd_status Guard(F&& body) {
  try {
    body();
    return DD_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.message;
    g_last_error_json =
        json{{"error", {{"code", "InvalidArgument"}, {"message", e.message}, {"exit_code", 2}}}}
            .dump();
    return DD_ERR_INVALID_ARGUMENT;
  } catch (const demodebias::StageError& e) {
    SetError(ToStatus(e.code()), e.code(), e.what(), e.stage());
    return ToStatus(e.code());
  } catch (const Error& e) {
    SetError(ToStatus(e.code()), e.code(), e.what(), "");
    return ToStatus(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    g_last_error_json =
        json{{"error", {{"code", "Internal"}, {"message", e.what()}, {"exit_code", 3}}}}.dump();
    return DD_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* message) {
  if (!ok) throw InvalidArgument{message};
}

demodebias::Matrix RowMajor(const double* data, int rows, int cols) {
  Require(data != nullptr && rows >= 0 && cols > 0, "invalid array");
  return Eigen::Map<const demodebias::Matrix>(data, rows, cols);
}

demodebias::Mask MaskFrom(const unsigned char* mask, int cols) {
  demodebias::Mask m;
  if (mask == nullptr) return m;
  for (int i = 0; i < cols; ++i) m.push_back(mask[i] != 0);
  return m;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* dd_version(void) { return "0.1.0"; }

const char* dd_status_name(dd_status status) {
  switch (status) {
    case DD_OK:
      return "Ok";
    case DD_ERR_INVALID_ARGUMENT:
      return "InvalidArgument";
    case DD_ERR_INTERNAL:
      return "Internal";
    default:
      break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code < 0 || code > static_cast<int>(ErrorCode::kParse)) return "Unknown";
  static thread_local std::string name;
  name = std::string(demodebias::ErrorCodeName(static_cast<ErrorCode>(code)));
  return name.c_str();
}

const char* dd_last_error(void) { return g_last_error.c_str(); }
const char* dd_last_error_json(void) { return g_last_error_json.c_str(); }

int dd_exit_code(dd_status status) {
  if (status == DD_OK) return 0;
  if (status == DD_ERR_INVALID_ARGUMENT) return 2;
  if (status == DD_ERR_INTERNAL) return 3;
  return demodebias::ExitCodeFor(static_cast<ErrorCode>(static_cast<int>(status) - 1));
}

void dd_string_free(char* s) { std::free(s); }

dd_status dd_dataset_generate(const char* world_json, const char* mix, int n_demos,
                              uint64_t seed, int chunk_size, dd_dataset** out) {
  return Guard([&] {
    Require(mix != nullptr && out != nullptr, "mix and out are required");
    demodebias::WorldConfig world;
    if (world_json != nullptr) world = demodebias::WorldFromJson(json::parse(world_json));
    const std::string m(mix);
    const json mix_json = !m.empty() && (m.front() == '[' || m.front() == '{')
                              ? json::parse(m)
                              : json(m);
    auto* h = new dd_dataset{demodebias::BuildBenchmarkDataset(
        world, demodebias::MixFromJson(mix_json), n_demos, seed, chunk_size)};
    *out = h;
  });
}

dd_status dd_dataset_load(const char* path, int chunk_size, dd_dataset** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    *out = new dd_dataset{demodebias::LoadDataset(path, chunk_size)};
  });
}

dd_status dd_dataset_save(const dd_dataset* dataset, const char* path) {
  return Guard([&] {
    Require(dataset != nullptr && path != nullptr, "dataset and path are required");
    demodebias::SaveDataset(path, dataset->dataset);
  });
}

size_t dd_dataset_size(const dd_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->dataset.demos.size();
}

dd_status dd_dataset_demo_shape(const dd_dataset* dataset, size_t index, int* rows,
                                int* action_dim, int* observation_dim) {
  return Guard([&] {
    Require(dataset != nullptr, "dataset is required");
    if (index >= dataset->dataset.demos.size()) Fail(ErrorCode::kOutOfRange, "demo index");
    const demodebias::Demonstration& d = dataset->dataset.demos[index];
    if (rows) *rows = d.length();
    if (action_dim) *action_dim = d.action_dim();
    if (observation_dim) *observation_dim = d.observation_dim();
  });
}

dd_status dd_dataset_demo_actions(const dd_dataset* dataset, size_t index, double* out) {
  return Guard([&] {
    Require(dataset != nullptr && out != nullptr, "dataset and out are required");
    if (index >= dataset->dataset.demos.size()) Fail(ErrorCode::kOutOfRange, "demo index");
    const demodebias::Matrix& a = dataset->dataset.demos[index].actions;
    Eigen::Map<demodebias::Matrix>(out, a.rows(), a.cols()) = a;
  });
}

void dd_dataset_free(dd_dataset* dataset) { delete dataset; }

dd_status dd_stats_compute(const dd_dataset* dataset, dd_stats** out) {
  return Guard([&] {
    Require(dataset != nullptr && out != nullptr, "dataset and out are required");
    *out = new dd_stats{demodebias::ComputeNormalizationStats(dataset->dataset)};
  });
}

dd_status dd_stats_from_json(const char* text, dd_stats** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "json and out are required");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      demodebias::Fail(ErrorCode::kParse, e.what());
    }
    *out = new dd_stats{demodebias::StatsFromJson(j)};
  });
}

dd_status dd_stats_to_json(const dd_stats* stats, char** out) {
  return Guard([&] {
    Require(stats != nullptr && out != nullptr, "stats and out are required");
    *out = CopyString(demodebias::StatsToJson(stats->stats).dump());
  });
}

void dd_stats_free(dd_stats* stats) { delete stats; }

dd_status dd_velocity_metric(const double* actions, int rows, int cols,
                             const unsigned char* eef_mask, const dd_stats* stats,
                             double* out) {
  return Guard([&] {
    Require(stats != nullptr && out != nullptr && eef_mask != nullptr,
            "mask, stats and out are required");
    *out = demodebias::VelocityMetric(demodebias::ActionChunk{0, RowMajor(actions, rows, cols)},
                                      MaskFrom(eef_mask, cols), stats->stats);
  });
}

dd_status dd_search_chunk_length(const double* actions, int rows, int cols,
                                 const unsigned char* eef_mask, const dd_stats* stats, int t,
                                 double vm_pred, int chunk_size, double clamp_low,
                                 double clamp_high, int* out_length) {
  return Guard([&] {
    Require(stats != nullptr && out_length != nullptr && eef_mask != nullptr,
            "mask, stats and out_length are required");
    demodebias::DebiasConfig config;
    config.chunk_size = chunk_size;
    config.clamp_low = clamp_low;
    config.clamp_high = clamp_high;
    config.Validate();
    const std::vector<double> v = demodebias::RowVelocities(RowMajor(actions, rows, cols),
                                                            MaskFrom(eef_mask, cols), stats->stats);
    *out_length = demodebias::SearchChunkLength(v, t, vm_pred, config);
  });
}

dd_status dd_rescale_chunk(const double* actions, int rows, int cols, int t, int length,
                           int chunk_size, const unsigned char* discrete_mask, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is required");
    demodebias::Demonstration demo;
    demo.actions = RowMajor(actions, rows, cols);
    const demodebias::Matrix m =
        demodebias::RescaleChunk(demo, t, length, chunk_size, MaskFrom(discrete_mask, cols));
    Eigen::Map<demodebias::Matrix>(out, m.rows(), m.cols()) = m;
  });
}

dd_status dd_vm_load(const char* path, dd_velocity_model** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    std::ifstream in(path, std::ios::binary);
    if (!in) demodebias::Fail(ErrorCode::kIo, std::string("cannot open '") + path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      demodebias::Fail(ErrorCode::kParse, e.what());
    }
    *out = new dd_velocity_model{demodebias::VelocityModel::FromJson(j)};
  });
}

dd_status dd_vm_predict(const dd_velocity_model* model, const double* observation,
                        int observation_dim, double* out) {
  return Guard([&] {
    Require(model != nullptr && observation != nullptr && out != nullptr,
            "model, observation and out are required");
    if (observation_dim != model->model.extractor().input_dim()) {
      demodebias::Fail(ErrorCode::kDimensionMismatch, "observation dim mismatch");
    }
    *out = demodebias::PredictVelocity(
        model->model, Eigen::Map<const demodebias::Vector>(observation, observation_dim));
  });
}

void dd_vm_free(dd_velocity_model* model) { delete model; }

dd_status dd_policy_load(const char* path, dd_policy** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "path and out are required");
    std::ifstream in(path, std::ios::binary);
    if (!in) demodebias::Fail(ErrorCode::kIo, std::string("cannot open '") + path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      demodebias::Fail(ErrorCode::kParse, e.what());
    }
    *out = new dd_policy{demodebias::PolicyModel::FromJson(j)};
  });
}

dd_status dd_policy_shape(const dd_policy* policy, int* chunk_size, int* action_dim,
                          int* observation_dim) {
  return Guard([&] {
    Require(policy != nullptr, "policy is required");
    if (chunk_size) *chunk_size = policy->policy.chunk_size();
    if (action_dim) *action_dim = policy->policy.action_dim();
    if (observation_dim) *observation_dim = policy->policy.net().input_dim();
  });
}

dd_status dd_policy_predict(const dd_policy* policy, const double* observation,
                            int observation_dim, double* out) {
  return Guard([&] {
    Require(policy != nullptr && observation != nullptr && out != nullptr,
            "policy, observation and out are required");
    if (observation_dim != policy->policy.net().input_dim()) {
      demodebias::Fail(ErrorCode::kDimensionMismatch, "observation dim mismatch");
    }
    const demodebias::Matrix chunk = policy->policy.PredictChunk(
        Eigen::Map<const demodebias::Vector>(observation, observation_dim));
    Eigen::Map<demodebias::Matrix>(out, chunk.rows(), chunk.cols()) = chunk;
  });
}

void dd_policy_free(dd_policy* policy) { delete policy; }

dd_status dd_fit_power_law(const double* x, const double* score, int n, dd_power_law_fit* out) {
  return Guard([&] {
    Require(x != nullptr && score != nullptr && out != nullptr && n >= 0,
            "x, score and out are required");
    std::vector<demodebias::ScalingPoint> points;
    for (int i = 0; i < n; ++i) points.push_back({x[i], score[i], std::to_string(i)});
    const demodebias::PowerLawFit fit = demodebias::FitPowerLaw(points);
    out->alpha = fit.alpha;
    out->beta = fit.beta;
    out->pearson_r = fit.pearson_r;
    out->n_points = static_cast<int>(fit.points.size());
    out->n_excluded = static_cast<int>(fit.excluded.size());
  });
}

dd_status dd_run_stage(const char* stage, const char* config_path, const char* overrides_json,
                       char** result_json) {
  return Guard([&] {
    Require(stage != nullptr && result_json != nullptr, "stage and result_json are required");
    *result_json = nullptr;
    const std::string name(stage);
    const auto& names = demodebias::StageNames();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      demodebias::Fail(ErrorCode::kConfig, "unknown stage '" + name + "'");
    }
    json file = json::object();
    if (config_path != nullptr) file = demodebias::LoadConfigFile(config_path);
    json overrides = json::object();
    if (overrides_json != nullptr) {
      try {
        overrides = json::parse(overrides_json);
      } catch (const json::exception& e) {
        demodebias::Fail(ErrorCode::kConfig, std::string("bad overrides: ") + e.what());
      }
    }
    const demodebias::RunConfig config = demodebias::ResolveRunConfig(file, overrides);
    const demodebias::StageResult r = demodebias::RunStage(name, config);
    *result_json = CopyString(demodebias::StageResultToJson(r).dump(2));
  });
}

}  // extern "C"
