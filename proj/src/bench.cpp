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

#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "error.hpp"
#include "rng.hpp"
#include "svg.hpp"

namespace demodebias {

using nlohmann::json;

const char* ConditionName(Condition c) {
  return c == Condition::kBiased ? "BIASED" : "DEBIASED";
}

Condition ConditionFromName(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "BIASED") return Condition::kBiased;
  if (upper == "DEBIASED") return Condition::kDebiased;
  Fail(ErrorCode::kConfig, "unknown condition '" + name + "'");
}

void BenchConfig::Validate() const {
  world.Validate();
  if (mix.empty()) Fail(ErrorCode::kConfig, "benchmark mix is empty");
  if (data_scales.empty()) Fail(ErrorCode::kConfig, "no data scales");
  for (int s : data_scales) {
    if (s < 1) Fail(ErrorCode::kConfig, "data scales must be >= 1");
  }
  if (conditions.empty()) Fail(ErrorCode::kConfig, "no conditions");
  if (n_seeds < 3) Fail(ErrorCode::kConfig, "n_seeds must be >= 3");
  if (trials_per_seed < 1) Fail(ErrorCode::kConfig, "trials_per_seed must be >= 1");
  if (chunk_size < 2) Fail(ErrorCode::kConfig, "chunk_size must be >= 2");
  if (sample_stride < 1) Fail(ErrorCode::kConfig, "sample_stride must be >= 1");
  if (horizon < 0 || horizon > chunk_size) {
    Fail(ErrorCode::kConfig, "horizon must be in [1, chunk_size] (0 = chunk_size)");
  }
  if (max_steps < 1) Fail(ErrorCode::kConfig, "max_steps must be >= 1");
  if (workers < 1) Fail(ErrorCode::kConfig, "workers must be >= 1");
  if (debias.chunk_size != chunk_size) {
    Fail(ErrorCode::kConfig, "debias.chunk_size differs from chunk_size");
  }
  debias.Validate();
  vm.Validate();
  policy.Validate();
}

std::vector<WorldState> TrialStates(const BenchConfig& config, int seed_index) {
  double left = 0.0, total = 0.0;
  for (const WeightedProfile& p : config.mix) {
    total += p.weight;
    if (p.profile.spatial_mode == SpatialMode::kLeft) left += p.weight;
  }
  Rng rng(DeriveStream(config.seed, "bench-trials", static_cast<std::uint64_t>(seed_index)));
  std::vector<WorldState> states;
  states.reserve(static_cast<std::size_t>(config.trials_per_seed));
  for (int i = 0; i < config.trials_per_seed; ++i) {
    const SpatialMode mode =
        rng.Uniform() * total < left ? SpatialMode::kLeft : SpatialMode::kRight;
    states.push_back(SampleInitialState(config.world, mode, rng));
  }
  return states;
}

namespace {

std::string ScaleStage(const char* stage, int scale) {
  return std::string(stage) + ":" + std::to_string(scale);
}

std::vector<PolicySample> DebiasedSamples(const Dataset& dataset,
                                          const BenchConfig& config, int scale,
                                          int seed_index, CellResult* cell) {
  const NormalizationStats& stats = *dataset.stats;
  const FeatureExtractor extractor = FeatureExtractor::Identity(dataset.observation_dim());
  VmTrainConfig vm = config.vm;
  vm.train.seed = DeriveStream(config.seed ^ config.vm.train.seed,
                               ScaleStage("bench-vm", scale),
                               static_cast<std::uint64_t>(seed_index));
  const TrainingPairs pairs =
      MakeTrainingPairs(dataset, config.chunk_size, stats, extractor, vm.stride);
  const VmTrainResult trained = TrainVm(pairs, extractor, stats, config.chunk_size, vm);
  DebiasConfig dc = config.debias;
  dc.stride = config.sample_stride;
  DebiasResult debiased = DebiasDataset(dataset, trained.model, dc, stats);
  cell->debias_report = debiased.report;
  std::vector<PolicySample> out;
  out.reserve(debiased.samples.size());
  for (DebiasedSample& s : debiased.samples) {
    out.push_back({std::move(s.observation), std::move(s.actions)});
  }
  return out;
}

}  // namespace

CellResult RunCell(const BenchConfig& config, int scale, Condition condition,
                   int seed_index) {
  CellResult cell;
  cell.scale = scale;
  cell.condition = condition;
  cell.seed_index = seed_index;
  try {
    const auto seed_cell = static_cast<std::uint64_t>(seed_index);
    Dataset dataset =
        BuildBenchmarkDataset(config.world, config.mix, scale,
                              DeriveStream(config.seed, ScaleStage("bench-data", scale), seed_cell),
                              config.chunk_size);
    dataset.stats = ComputeNormalizationStats(dataset);

    std::vector<PolicySample> samples =
        condition == Condition::kBiased
            ? RawChunkSamples(dataset, config.chunk_size, config.sample_stride)
            : DebiasedSamples(dataset, config, scale, seed_index, &cell);
    cell.training_samples = static_cast<int>(samples.size());

    PolicyTrainConfig pc = config.policy;
    pc.train.seed = DeriveStream(config.seed ^ config.policy.train.seed,
                                 ScaleStage("bench-policy", scale), seed_cell);
    const PolicyTrainResult policy = TrainPolicy(samples, *dataset.stats, pc);

    for (const WorldState& init : TrialStates(config, seed_index)) {
      const Rollout r = RolloutPolicy(config.world, policy.model, init, config.max_steps,
                                      config.effective_horizon());
      cell.trial_scores.push_back(r.score.trial_score);
    }
    double sum = 0.0;
    for (double s : cell.trial_scores) sum += s;
    cell.mean_score = sum / static_cast<double>(cell.trial_scores.size());
    cell.ok = true;
  } catch (const Error& e) {
    cell.ok = false;
    cell.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
    cell.trial_scores.clear();
  }
  return cell;
}

SignTest OneSidedSignTest(const std::vector<double>& differences) {
  SignTest t;
  for (double d : differences) {
    if (d > 0.0) {
      ++t.wins;
    } else if (d < 0.0) {
      ++t.losses;
    } else {
      ++t.ties;
    }
  }
  const int n = t.wins + t.losses;
  if (n == 0) return t;
  // Sum of C(n, k) / 2^n for k >= wins, in log space for stability.
  double p = 0.0;
  for (int k = t.wins; k <= n; ++k) {
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) -
                  n * std::log(2.0));
  }
  t.p_value = std::min(1.0, p);
  return t;
}

BenchReport SummarizeCells(std::vector<CellResult> cells, const BenchConfig& config) {
  BenchReport report;
  std::sort(cells.begin(), cells.end(), [](const CellResult& a, const CellResult& b) {
    if (a.scale != b.scale) return a.scale < b.scale;
    if (a.condition != b.condition) return a.condition < b.condition;
    return a.seed_index < b.seed_index;
  });
  report.cells = std::move(cells);

  // scale -> condition -> seed -> mean
  std::map<int, std::map<Condition, std::map<int, double>>> grid;
  long at_t = 0, debiased_total = 0;
  for (const CellResult& c : report.cells) {
    if (!c.ok) continue;
    grid[c.scale][c.condition][c.seed_index] = c.mean_score;
    if (c.debias_report) {
      debiased_total += c.debias_report->emitted;
      auto it = c.debias_report->length_histogram.find(config.chunk_size);
      if (it != c.debias_report->length_histogram.end()) at_t += it->second;
    }
  }
  report.fraction_length_at_t =
      debiased_total > 0 ? static_cast<double>(at_t) / static_cast<double>(debiased_total) : 0.0;

  std::vector<int> scales = config.data_scales;
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  std::vector<ScalingPoint> points_b, points_d;
  for (int scale : scales) {
    ScaleSummary s;
    s.scale = scale;
    const auto& b = grid[scale][Condition::kBiased];
    const auto& d = grid[scale][Condition::kDebiased];
    for (const auto& [seed, v] : b) s.mean_biased += v;
    for (const auto& [seed, v] : d) s.mean_debiased += v;
    s.n_biased = static_cast<int>(b.size());
    s.n_debiased = static_cast<int>(d.size());
    if (s.n_biased > 0) s.mean_biased /= s.n_biased;
    if (s.n_debiased > 0) s.mean_debiased /= s.n_debiased;
    std::vector<double> diffs;
    for (const auto& [seed, v] : d) {
      auto it = b.find(seed);
      if (it != b.end()) diffs.push_back(v - it->second);
    }
    s.sign_test = OneSidedSignTest(diffs);
    if (s.n_biased > 0) points_b.push_back({double(scale), s.mean_biased, std::to_string(scale)});
    if (s.n_debiased > 0) {
      points_d.push_back({double(scale), s.mean_debiased, std::to_string(scale)});
    }
    report.scales.push_back(s);
  }

  auto fit = [](const std::vector<ScalingPoint>& pts, std::optional<PowerLawFit>* out,
                std::string* err) {
    if (pts.empty()) return;
    try {
      *out = FitPowerLaw(pts);
    } catch (const Error& e) {
      *err = std::string(ErrorCodeName(e.code())) + ": " + e.what();
    }
  };
  fit(points_b, &report.fit_biased, &report.fit_biased_error);
  fit(points_d, &report.fit_debiased, &report.fit_debiased_error);

  DataEfficiency& eff = report.efficiency;
  bool have_biased = false;
  for (const ScaleSummary& s : report.scales) {
    if (s.n_biased == 0) continue;
    if (!have_biased || s.mean_biased > eff.biased_best) {
      eff.biased_best = s.mean_biased;
      eff.biased_best_scale = s.scale;
      have_biased = true;
    }
  }
  if (have_biased) {
    for (const ScaleSummary& s : report.scales) {
      if (s.n_debiased > 0 && s.mean_debiased >= eff.biased_best) {
        eff.debiased_match_scale = s.scale;
        break;
      }
    }
    for (const ScaleSummary& s : report.scales) {
      if (s.n_biased > 0) eff.full_data_scale = std::max(eff.full_data_scale, s.scale);
    }
    const bool matched = eff.debiased_match_scale > 0;
    eff.holds = matched && 2 * eff.debiased_match_scale <= eff.full_data_scale;
    eff.holds_vs_best_scale = matched && 2 * eff.debiased_match_scale <= eff.biased_best_scale;
  }
  return report;
}

BenchReport RunBenchmark(const BenchConfig& config, const CellCallback& on_cell) {
  config.Validate();
  struct Task {
    int scale;
    Condition condition;
    int seed_index;
  };
  std::vector<Task> tasks;
  for (int scale : config.data_scales) {
    for (int seed = 0; seed < config.n_seeds; ++seed) {
      for (Condition c : config.conditions) tasks.push_back({scale, c, seed});
    }
  }
  std::vector<CellResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      results[i] = RunCell(config, tasks[i].scale, tasks[i].condition, tasks[i].seed_index);
      if (on_cell) {
        std::lock_guard<std::mutex> lock(callback_mutex);
        on_cell(results[i]);
      }
    }
  };
  const int n_workers = std::min<int>(config.workers, static_cast<int>(tasks.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return SummarizeCells(std::move(results), config);
}

std::string BenchCsv(const BenchReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "scale,condition,seed,trial,score\n";
  for (const CellResult& c : report.cells) {
    if (!c.ok) continue;
    for (std::size_t i = 0; i < c.trial_scores.size(); ++i) {
      out << c.scale << ',' << ConditionName(c.condition) << ',' << c.seed_index << ','
          << i << ',' << c.trial_scores[i] << '\n';
    }
  }
  return out.str();
}

json BenchSummaryJson(const BenchReport& report) {
  json scales = json::array();
  for (const ScaleSummary& s : report.scales) {
    scales.push_back({{"scale", s.scale},
                      {"mean_biased", s.mean_biased},
                      {"mean_debiased", s.mean_debiased},
                      {"n_biased", s.n_biased},
                      {"n_debiased", s.n_debiased},
                      {"sign_test",
                       {{"wins", s.sign_test.wins},
                        {"losses", s.sign_test.losses},
                        {"ties", s.sign_test.ties},
                        {"p_value", s.sign_test.p_value}}}});
  }
  json cells = json::array();
  json missing = json::array();
  for (const CellResult& c : report.cells) {
    json cell = {{"scale", c.scale},
                 {"condition", ConditionName(c.condition)},
                 {"seed", c.seed_index},
                 {"ok", c.ok}};
    if (c.ok) {
      cell["mean_score"] = c.mean_score;
      cell["training_samples"] = c.training_samples;
      if (c.debias_report) cell["debias"] = DebiasReportToJson(*c.debias_report);
    } else {
      cell["error"] = c.error;
      missing.push_back({{"scale", c.scale},
                         {"condition", ConditionName(c.condition)},
                         {"seed", c.seed_index}});
    }
    cells.push_back(std::move(cell));
  }
  json fits = json::object();
  if (report.fit_biased) fits["BIASED"] = FitToJson(*report.fit_biased);
  if (report.fit_debiased) fits["DEBIASED"] = FitToJson(*report.fit_debiased);
  json fit_errors = json::object();
  if (!report.fit_biased_error.empty()) fit_errors["BIASED"] = report.fit_biased_error;
  if (!report.fit_debiased_error.empty()) fit_errors["DEBIASED"] = report.fit_debiased_error;
  json j = {{"scales", std::move(scales)},
            {"fits", std::move(fits)},
            {"data_efficiency",
             {{"holds", report.efficiency.holds},
              {"holds_vs_best_scale", report.efficiency.holds_vs_best_scale},
              {"biased_best", report.efficiency.biased_best},
              {"full_data_scale", report.efficiency.full_data_scale},
              {"biased_best_scale", report.efficiency.biased_best_scale},
              {"debiased_match_scale", report.efficiency.debiased_match_scale}}},
            {"fraction_length_at_t", report.fraction_length_at_t},
            {"missing_cells", std::move(missing)},
            {"cells", std::move(cells)}};
  if (!fit_errors.empty()) j["fit_errors"] = std::move(fit_errors);
  if (report.fit_biased && report.fit_debiased) {
    j["fit_comparison"] = ComparisonToJson(CompareFits(*report.fit_debiased, *report.fit_biased));
  }
  return j;
}

std::string BenchSvg(const BenchReport& report) {
  svg::Series biased{"BIASED", {}, true, true, "#7f7f7f"};
  svg::Series debiased{"DEBIASED", {}, true, true, "#d62728"};
  for (const ScaleSummary& s : report.scales) {
    if (s.n_biased > 0) biased.points.emplace_back(s.scale, s.mean_biased);
    if (s.n_debiased > 0) debiased.points.emplace_back(s.scale, s.mean_debiased);
  }
  svg::Axes axes{"Mean trial score vs. demonstrations", "demonstrations", "mean trial score",
                 true, false};
  return svg::LinePlot(axes, {biased, debiased});
}

json BenchConfigToJson(const BenchConfig& c) {
  json conditions = json::array();
  for (Condition k : c.conditions) conditions.push_back(ConditionName(k));
  return json{{"world", WorldToJson(c.world)},
              {"mix", MixToJson(c.mix)},
              {"data_scales", c.data_scales},
              {"conditions", std::move(conditions)},
              {"n_seeds", c.n_seeds},
              {"trials_per_seed", c.trials_per_seed},
              {"chunk_size", c.chunk_size},
              {"sample_stride", c.sample_stride},
              {"horizon", c.horizon},
              {"max_steps", c.max_steps},
              {"vm", VmTrainConfigToJson(c.vm)},
              {"policy", PolicyTrainConfigToJson(c.policy)},
              {"debias", DebiasConfigToJson(c.debias)},
              {"seed", c.seed},
              {"workers", c.workers}};
}

BenchConfig BenchConfigFromJson(const json& j) {
  BenchConfig c;
  try {
    if (j.contains("world")) c.world = WorldFromJson(j["world"]);
    if (j.contains("mix")) c.mix = MixFromJson(j["mix"]);
    if (j.contains("data_scales")) c.data_scales = j["data_scales"].get<std::vector<int>>();
    if (j.contains("conditions")) {
      c.conditions.clear();
      for (const json& n : j["conditions"]) c.conditions.push_back(ConditionFromName(n.get<std::string>()));
    }
    if (j.contains("n_seeds")) c.n_seeds = j["n_seeds"].get<int>();
    if (j.contains("trials_per_seed")) c.trials_per_seed = j["trials_per_seed"].get<int>();
    if (j.contains("chunk_size")) c.chunk_size = j["chunk_size"].get<int>();
    if (j.contains("sample_stride")) c.sample_stride = j["sample_stride"].get<int>();
    if (j.contains("horizon")) c.horizon = j["horizon"].get<int>();
    if (j.contains("max_steps")) c.max_steps = j["max_steps"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad bench config: ") + e.what());
  }
  if (j.contains("vm")) c.vm = VmTrainConfigFromJson(j["vm"], c.vm);
  if (j.contains("policy")) c.policy = PolicyTrainConfigFromJson(j["policy"], c.policy);
  json debias = j.contains("debias") ? j["debias"] : json::object();
  if (!debias.contains("chunk_size")) debias["chunk_size"] = c.chunk_size;
  c.debias = DebiasConfigFromJson(debias, kActionDim);
  if (!debias.contains("discrete_dims")) c.debias.discrete_dims[kGripDim] = true;
  c.Validate();
  return c;
}

}  // namespace demodebias
