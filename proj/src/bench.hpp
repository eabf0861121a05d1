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

// Biased vs. debiased behaviour-cloning benchmark over data scales and seeds.

#ifndef DEMODEBIAS_BENCH_HPP_
#define DEMODEBIAS_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "debias.hpp"
#include "policy.hpp"
#include "scaling.hpp"
#include "velocity_model.hpp"
#include "world.hpp"

namespace demodebias {

enum class Condition { kBiased, kDebiased };

const char* ConditionName(Condition c);
Condition ConditionFromName(const std::string& name);

struct BenchConfig {
  WorldConfig world;
  std::vector<WeightedProfile> mix = PresetMix("two-speed");
  std::vector<int> data_scales{15, 30, 60, 120};
  std::vector<Condition> conditions{Condition::kBiased, Condition::kDebiased};
  int n_seeds = 5;
  int trials_per_seed = 20;
  int chunk_size = 30;
  // Offset stride for policy training samples, both conditions.
  int sample_stride = 1;
  // Steps executed per predicted chunk before re-planning; 0 means T.
  int horizon = 0;
  int max_steps = 300;
  VmTrainConfig vm;
  PolicyTrainConfig policy;
  DebiasConfig debias{30, 0.5, 1.5, {false, false, true}, 1};
  std::uint64_t seed = 0;
  int workers = 1;

  int effective_horizon() const { return horizon > 0 ? horizon : chunk_size; }
  void Validate() const;
};

struct CellResult {
  int scale = 0;
  Condition condition = Condition::kBiased;
  int seed_index = 0;
  bool ok = false;
  std::string error;  // set when !ok; the cell is then missing
  std::vector<double> trial_scores;
  double mean_score = 0.0;
  int training_samples = 0;
  std::optional<DebiasReport> debias_report;
};

struct SignTest {
  int wins = 0;
  int losses = 0;
  int ties = 0;
  double p_value = 1.0;  // one-sided, ties dropped
};

struct ScaleSummary {
  int scale = 0;
  double mean_biased = 0.0;
  double mean_debiased = 0.0;
  int n_biased = 0;
  int n_debiased = 0;
  SignTest sign_test;  // debiased > biased, paired by seed
};

// DEBIASED reaching BIASED's best mean score with at most half the data.
// `holds` measures "half" against the full-data (largest) scale;
// `holds_vs_best_scale` against the scale where BIASED peaked, which is
// unattainable by construction when that is the smallest scale.
struct DataEfficiency {
  bool holds = false;
  bool holds_vs_best_scale = false;
  double biased_best = 0.0;
  int biased_best_scale = 0;
  int full_data_scale = 0;
  // Smallest scale where DEBIASED reaches biased_best; 0 when never.
  int debiased_match_scale = 0;
};

struct BenchReport {
  std::vector<CellResult> cells;
  std::vector<ScaleSummary> scales;
  std::optional<PowerLawFit> fit_biased;
  std::optional<PowerLawFit> fit_debiased;
  std::string fit_biased_error;
  std::string fit_debiased_error;
  DataEfficiency efficiency;
  // Fraction of debiased samples (all cells) with chosen length == T.
  double fraction_length_at_t = 0.0;
};

// Runs one cell. Everything is derived from (config.seed, scale, seed
// index); the condition only decides whether chunks are debiased, so both
// conditions see the same demonstrations and the same evaluation starts.
CellResult RunCell(const BenchConfig& config, int scale, Condition condition,
                   int seed_index);

// Initial states shared by all cells with this seed index.
std::vector<WorldState> TrialStates(const BenchConfig& config, int seed_index);

using CellCallback = std::function<void(const CellResult&)>;

BenchReport RunBenchmark(const BenchConfig& config,
                         const CellCallback& on_cell = nullptr);

// Rebuilds summaries, fits and tests from cells.
BenchReport SummarizeCells(std::vector<CellResult> cells,
                           const BenchConfig& config);

// P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
SignTest OneSidedSignTest(const std::vector<double>& differences);

std::string BenchCsv(const BenchReport& report);
nlohmann::json BenchSummaryJson(const BenchReport& report);
std::string BenchSvg(const BenchReport& report);

nlohmann::json BenchConfigToJson(const BenchConfig& c);
BenchConfig BenchConfigFromJson(const nlohmann::json& j);

}  // namespace demodebias

#endif  // DEMODEBIAS_BENCH_HPP_
