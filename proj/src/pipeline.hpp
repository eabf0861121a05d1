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

// Run configuration and the file-based stages behind the command-line tool.
// Every stage reads its inputs from files, writes its outputs under the run
// directory and records their SHA-256 hashes in manifest.json.

#ifndef DEMODEBIAS_PIPELINE_HPP_
#define DEMODEBIAS_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bench.hpp"
#include "curation.hpp"
#include "debias.hpp"
#include "error.hpp"
#include "policy.hpp"
#include "velocity_model.hpp"
#include "world.hpp"

namespace demodebias {

struct RunConfig {
  // Merged configuration (file plus overrides), echoed into report.json
  // without the output directory.
  nlohmann::json source;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 1;
  int chunk_size = 30;
  int stride = 1;
  WorldConfig world;
  int n_demos = 100;
  int n_tasks = 1;
  std::vector<WeightedProfile> mix;
  SamplingSpec sampling;
  VmTrainConfig vm;
  PolicyTrainConfig policy;
  DebiasConfig debias;
  BenchConfig bench;
  Condition train_condition = Condition::kDebiased;
  int eval_trials = 20;
  int max_steps = 300;
  int horizon = 0;

  // Optional explicit inputs; empty means the canonical file in out_dir.
  struct Inputs {
    std::string dataset;
    std::string stats;
    std::string vm;
    std::string samples;
    std::string policy;
    std::string scaling;
  } inputs;
};

// `overrides` is merge-patched over `file`. The output directory comes from
// "out", then $DEMODEBIAS_OUT, then "demodebias_out". Relative paths are
// taken relative to the working directory. Throws kConfig.
RunConfig ResolveRunConfig(const nlohmann::json& file,
                           const nlohmann::json& overrides);

nlohmann::json LoadConfigFile(const std::string& path);

struct Artifact {
  std::string name;  // path relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct StageResult {
  std::string stage;
  std::vector<Artifact> artifacts;
  nlohmann::json summary;
};

// generate, sample, stats, train-vm, debias, train-policy, evaluate, bench,
// fit-scaling, report, pipeline.
const std::vector<std::string>& StageNames();

// Runs one stage (or "pipeline"). Errors are rethrown as StageError naming
// the failing stage; files written before the failure are kept.
StageResult RunStage(const std::string& stage, const RunConfig& config);

class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), cause.what()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// 2 for configuration problems, 3 for stage failures.
int ExitCodeFor(ErrorCode code);

nlohmann::json StageResultToJson(const StageResult& r);
nlohmann::json ErrorToJson(ErrorCode code, const std::string& message,
                           const std::string& stage);

}  // namespace demodebias

#endif  // DEMODEBIAS_PIPELINE_HPP_
