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

#include "pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hash.hpp"
#include "rng.hpp"
#include "scaling.hpp"
#include "trajectory.hpp"

namespace demodebias {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Extra skill tag per task when a run generates several tasks, so that
// curation has something to rank.
constexpr const char* kTaskSkills[] = {"grasp", "pour", "fold", "wipe", "stack", "push", "open"};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json ParseJson(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, "cannot parse " + what + ": " + e.what());
  }
}

template <typename T>
T Get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad value for '") + key + "': " + e.what());
  }
}

json Section(const json& j, const char* key) {
  if (!j.contains(key)) return json::object();
  if (!j[key].is_object()) Fail(ErrorCode::kConfig, std::string("'") + key + "' must be an object");
  return j[key];
}

std::string CurveCsv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "step,train_mse,val_mse\n";
  for (const CurvePoint& p : curve) out << p.step << ',' << p.train_mse << ',' << p.val_mse << '\n';
  return out.str();
}

// Writes files under the run directory and keeps their hashes.
class Writer {
 public:
  Writer(const RunConfig& config, StageResult* result)
      : dir_(config.out_dir), result_(result) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) Fail(ErrorCode::kIo, "cannot create '" + dir_ + "': " + ec.message());
  }

  std::string Path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  void Text(const std::string& name, const std::string& content) {
    std::ofstream out(Path(name), std::ios::binary);
    if (!out) Fail(ErrorCode::kIo, "cannot write '" + Path(name) + "'");
    out << content;
    out.close();
    if (!out) Fail(ErrorCode::kIo, "write to '" + Path(name) + "' failed");
    result_->artifacts.push_back({name, Sha256Hex(content), content.size()});
  }

  void Json(const std::string& name, const json& j) { Text(name, j.dump(2) + "\n"); }

 private:
  std::string dir_;
  StageResult* result_;
};

std::string InputPath(const std::string& explicit_path, const RunConfig& config,
                      const std::string& canonical) {
  const std::string path =
      explicit_path.empty() ? (fs::path(config.out_dir) / canonical).string() : explicit_path;
  if (!fs::exists(path)) {
    Fail(ErrorCode::kIo, "input '" + path + "' does not exist (run the producing stage or "
                             "set it under \"inputs\")");
  }
  return path;
}

Dataset LoadInputDataset(const RunConfig& config) {
  return LoadDataset(InputPath(config.inputs.dataset, config, "dataset.jsonl"), config.chunk_size);
}

NormalizationStats LoadInputStats(const RunConfig& config) {
  return StatsFromJson(
      ParseJson(ReadFile(InputPath(config.inputs.stats, config, "stats.json")), "stats"));
}

Dataset GenerateDataset(const RunConfig& config, json* counts) {
  if (config.n_tasks == 1) {
    Dataset ds = BuildBenchmarkDataset(config.world, config.mix, config.n_demos,
                                       DeriveStream(config.seed, "generate"), config.chunk_size);
    const std::vector<int> c = StratifiedCounts(config.mix, config.n_demos);
    for (std::size_t i = 0; i < c.size(); ++i) {
      counts->push_back({{"profile", ProfileToJson(config.mix[i].profile)},
                         {"weight", config.mix[i].weight},
                         {"count", c[i]}});
    }
    return ds;
  }
  // Equal split of n over tasks by largest remainder.
  std::vector<WeightedProfile> task_weights(static_cast<std::size_t>(config.n_tasks));
  for (WeightedProfile& w : task_weights) w.weight = 1.0 / config.n_tasks;
  const std::vector<int> per_task = StratifiedCounts(task_weights, config.n_demos);
  Dataset ds;
  ds.chunk_size = config.chunk_size;
  for (int k = 0; k < config.n_tasks; ++k) {
    const int n_k = per_task[static_cast<std::size_t>(k)];
    if (n_k == 0) continue;
    char task_id[64];
    std::snprintf(task_id, sizeof(task_id), "%s-%02d", config.world.task_id.c_str(), k);
    WorldConfig world = config.world;
    world.task_id = task_id;
    world.seed = DeriveStream(config.world.seed, "task", static_cast<std::uint64_t>(k));
    std::vector<WeightedProfile> mix = config.mix;
    const char* extra = kTaskSkills[static_cast<std::size_t>(k) % std::size(kTaskSkills)];
    for (WeightedProfile& p : mix) p.profile.skills.push_back(extra);
    Dataset part = BuildBenchmarkDataset(
        world, mix, n_k, DeriveStream(config.seed, "generate", static_cast<std::uint64_t>(k)),
        config.chunk_size);
    const std::vector<int> c = StratifiedCounts(mix, n_k);
    for (std::size_t i = 0; i < c.size(); ++i) {
      counts->push_back({{"task_id", task_id},
                         {"profile", ProfileToJson(mix[i].profile)},
                         {"weight", mix[i].weight},
                         {"count", c[i]}});
    }
    for (Demonstration& d : part.demos) {
      d.episode_id = std::string(task_id) + "/" + d.episode_id;
      ds.demos.push_back(std::move(d));
    }
  }
  return ds;
}

std::string DatasetText(const Dataset& ds) {
  std::ostringstream out;
  WriteDemonstrations(out, ds.demos);
  return out.str();
}

json TaskCounts(const Dataset& ds) {
  std::map<std::string, int> tasks;
  for (const Demonstration& d : ds.demos) ++tasks[d.task_id];
  return json{{"episodes", ds.demos.size()}, {"tasks", tasks.size()}, {"per_task", tasks}};
}

StageResult Generate(const RunConfig& config) {
  StageResult r{"generate", {}, {}};
  Writer w(config, &r);
  json counts = json::array();
  const Dataset ds = GenerateDataset(config, &counts);
  w.Text("dataset.jsonl", DatasetText(ds));
  r.summary = {{"n", ds.demos.size()},
               {"tasks", config.n_tasks},
               {"seed", config.seed},
               {"world", WorldToJson(config.world)},
               {"counts", std::move(counts)}};
  w.Json("generate_manifest.json", r.summary);
  return r;
}

StageResult Sample(const RunConfig& config) {
  StageResult r{"sample", {}, {}};
  Writer w(config, &r);
  const Dataset ds = LoadInputDataset(config);
  const Dataset sampled = SampleDataset(ds, config.sampling);
  w.Text("sampled.jsonl", DatasetText(sampled));
  const SkillHistogram h = ComputeSkillHistogram(sampled, config.sampling.relevance_skills);
  w.Text("skill_histogram.csv", SkillHistogramCsv(h));
  w.Text("skill_histogram.svg", SkillHistogramSvg(h, "Skill distribution"));
  r.summary = {{"spec", SamplingSpecToJson(config.sampling)},
               {"input", TaskCounts(ds)},
               {"output", TaskCounts(sampled)},
               {"relevant_coverage", h.relevant_coverage}};
  w.Json("sample_manifest.json", r.summary);
  return r;
}

StageResult Stats(const RunConfig& config) {
  StageResult r{"stats", {}, {}};
  Writer w(config, &r);
  const NormalizationStats stats = ComputeNormalizationStats(LoadInputDataset(config));
  r.summary = StatsToJson(stats);
  w.Json("stats.json", r.summary);
  return r;
}

StageResult TrainVmStage(const RunConfig& config) {
  StageResult r{"train-vm", {}, {}};
  Writer w(config, &r);
  const Dataset ds = LoadInputDataset(config);
  const NormalizationStats stats = LoadInputStats(config);
  const FeatureExtractor extractor = FeatureExtractor::Identity(ds.observation_dim());
  VmTrainConfig vm = config.vm;
  vm.train.seed = DeriveStream(config.seed ^ config.vm.train.seed, "train-vm");
  const TrainingPairs pairs = MakeTrainingPairs(ds, config.chunk_size, stats, extractor, vm.stride);
  const VmTrainResult trained = TrainVm(pairs, extractor, stats, config.chunk_size, vm);
  w.Json("vm.json", trained.model.ToJson());
  w.Text("vm_curve.csv", CurveCsv(trained.curve));
  double best = trained.curve.empty() ? 0.0 : trained.curve.front().val_mse;
  for (const CurvePoint& p : trained.curve) best = std::min(best, p.val_mse);
  r.summary = {{"pairs", pairs.targets.size()}, {"best_val_mse", best}};
  return r;
}

StageResult DebiasStage(const RunConfig& config) {
  StageResult r{"debias", {}, {}};
  Writer w(config, &r);
  const Dataset ds = LoadInputDataset(config);
  const NormalizationStats stats = LoadInputStats(config);
  const VelocityModel vm = VelocityModel::FromJson(
      ParseJson(ReadFile(InputPath(config.inputs.vm, config, "vm.json")), "velocity model"));
  const DebiasResult result = DebiasDataset(ds, vm, config.debias, stats);
  std::ostringstream samples;
  WriteDebiasedSamples(samples, result.samples);
  w.Text("debiased.jsonl", samples.str());
  r.summary = DebiasReportToJson(result.report);
  w.Json("debias_report.json", r.summary);
  return r;
}

std::vector<PolicySample> ReadPolicySamples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<PolicySample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = ParseJson(line, "debiased sample");
    try {
      const auto obs = j.at("obs").get<std::vector<double>>();
      const auto rows = j.at("actions").get<std::vector<std::vector<double>>>();
      PolicySample s;
      s.observation = Eigen::Map<const Vector>(obs.data(), static_cast<Eigen::Index>(obs.size()));
      const auto cols = static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().size());
      s.chunk.resize(static_cast<Eigen::Index>(rows.size()), cols);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != cols) {
          Fail(ErrorCode::kDimensionMismatch, "ragged action rows in '" + path + "'");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
          s.chunk(static_cast<Eigen::Index>(i), k) = rows[i][static_cast<std::size_t>(k)];
        }
      }
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      Fail(ErrorCode::kParse, "bad sample in '" + path + "': " + e.what());
    }
  }
  return out;
}

std::string PolicyFileName(Condition c) {
  return c == Condition::kBiased ? "policy_biased.json" : "policy_debiased.json";
}

StageResult TrainPolicyFor(const RunConfig& config, Condition condition) {
  StageResult r{"train-policy", {}, {}};
  Writer w(config, &r);
  const Dataset ds = LoadInputDataset(config);
  const NormalizationStats stats = LoadInputStats(config);
  std::vector<PolicySample> samples =
      condition == Condition::kBiased
          ? RawChunkSamples(ds, config.chunk_size, config.debias.stride)
          : ReadPolicySamples(InputPath(config.inputs.samples, config, "debiased.jsonl"));
  PolicyTrainConfig pc = config.policy;
  // Both conditions share the training seed.
  pc.train.seed = DeriveStream(config.seed ^ config.policy.train.seed, "train-policy");
  const PolicyTrainResult trained = TrainPolicy(samples, stats, pc);
  const std::string name = PolicyFileName(condition);
  w.Json(name, trained.model.ToJson());
  w.Text(name.substr(0, name.size() - 5) + "_curve.csv", CurveCsv(trained.curve));
  r.summary = {{"condition", ConditionName(condition)}, {"samples", samples.size()}};
  return r;
}

json EvaluatePolicy(const RunConfig& config, const PolicyModel& policy) {
  BenchConfig bc = config.bench;
  bc.trials_per_seed = config.eval_trials;
  bc.seed = DeriveStream(config.seed, "evaluate");
  json scores = json::array();
  double sum = 0.0;
  for (const WorldState& init : TrialStates(bc, 0)) {
    const Rollout roll = RolloutPolicy(config.world, policy, init, config.max_steps,
                                       config.horizon > 0 ? config.horizon : config.chunk_size);
    scores.push_back(roll.score.trial_score);
    sum += roll.score.trial_score;
  }
  return json{{"mean_score", sum / config.eval_trials}, {"trial_scores", std::move(scores)}};
}

StageResult Evaluate(const RunConfig& config) {
  StageResult r{"evaluate", {}, json::object()};
  Writer w(config, &r);
  bool any = false;
  for (Condition c : {Condition::kBiased, Condition::kDebiased}) {
    const fs::path path = fs::path(config.out_dir) / PolicyFileName(c);
    if (!fs::exists(path)) continue;
    const PolicyModel policy =
        PolicyModel::FromJson(ParseJson(ReadFile(path.string()), "policy"));
    r.summary[ConditionName(c)] = EvaluatePolicy(config, policy);
    any = true;
  }
  if (!config.inputs.policy.empty()) {
    const PolicyModel policy = PolicyModel::FromJson(
        ParseJson(ReadFile(InputPath(config.inputs.policy, config, "")), "policy"));
    r.summary["input"] = EvaluatePolicy(config, policy);
    any = true;
  }
  if (!any) Fail(ErrorCode::kConfig, "no trained policy to evaluate");
  w.Json("evaluation.json", r.summary);
  return r;
}

StageResult Bench(const RunConfig& config) {
  StageResult r{"bench", {}, {}};
  Writer w(config, &r);
  const BenchReport report = RunBenchmark(config.bench);
  w.Text("bench.csv", BenchCsv(report));
  r.summary = BenchSummaryJson(report);
  w.Json("bench_summary.json", r.summary);
  w.Text("bench.svg", BenchSvg(report));
  return r;
}

std::string ScalingCsv(const std::vector<ScalingPoint>& points) {
  std::ostringstream out;
  out.precision(17);
  out << "x,score,label\n";
  for (const ScalingPoint& p : points) out << p.x << ',' << p.score << ',' << p.label << '\n';
  return out.str();
}

StageResult FitScaling(const RunConfig& config) {
  StageResult r{"fit-scaling", {}, {}};
  Writer w(config, &r);
  if (!config.inputs.scaling.empty()) {
    const PowerLawFit fit =
        FitPowerLaw(ParseScalingCsv(ReadFile(InputPath(config.inputs.scaling, config, ""))));
    r.summary = FitToJson(fit);
    w.Json("scaling_fit.json", r.summary);
    w.Text("scaling_fit.svg", FitSvg({{"fit", fit}}, "Optimality gap vs. data"));
    return r;
  }
  // Without an explicit CSV, fit the benchmark means of each condition.
  const json summary =
      ParseJson(ReadFile(InputPath("", config, "bench_summary.json")), "bench summary");
  std::vector<ScalingPoint> biased, debiased;
  for (const json& s : summary.at("scales")) {
    const int scale = s.at("scale").get<int>();
    if (s.at("n_biased").get<int>() > 0) {
      biased.push_back({double(scale), s.at("mean_biased").get<double>(), std::to_string(scale)});
    }
    if (s.at("n_debiased").get<int>() > 0) {
      debiased.push_back({double(scale), s.at("mean_debiased").get<double>(),
                          std::to_string(scale)});
    }
  }
  w.Text("scaling_biased.csv", ScalingCsv(biased));
  w.Text("scaling_debiased.csv", ScalingCsv(debiased));
  r.summary = json::object();
  std::vector<std::pair<std::string, PowerLawFit>> fits;
  for (auto& [name, pts] : {std::pair{"BIASED", biased}, std::pair{"DEBIASED", debiased}}) {
    try {
      fits.emplace_back(name, FitPowerLaw(pts));
      r.summary[name] = FitToJson(fits.back().second);
    } catch (const Error& e) {
      r.summary[name] = {{"error", std::string(ErrorCodeName(e.code())) + ": " + e.what()}};
    }
  }
  if (fits.size() == 2) {
    r.summary["comparison"] = ComparisonToJson(CompareFits(fits[1].second, fits[0].second));
  }
  w.Json("scaling_fit.json", r.summary);
  w.Text("scaling_fit.svg", FitSvg(fits, "Optimality gap vs. demonstrations"));
  return r;
}

json ReadManifest(const RunConfig& config) {
  const fs::path path = fs::path(config.out_dir) / "manifest.json";
  if (!fs::exists(path)) return json{{"artifacts", json::object()}};
  return ParseJson(ReadFile(path.string()), "manifest");
}

void UpdateManifest(const RunConfig& config, const StageResult& r) {
  json manifest = ReadManifest(config);
  for (const Artifact& a : r.artifacts) {
    manifest["artifacts"][a.name] = {{"sha256", a.sha256}, {"bytes", a.bytes}, {"stage", r.stage}};
  }
  const std::string text = manifest.dump(2) + "\n";
  std::ofstream out(fs::path(config.out_dir) / "manifest.json", std::ios::binary);
  out << text;
  if (!out) Fail(ErrorCode::kIo, "cannot write manifest.json");
}

json OptionalJson(const RunConfig& config, const std::string& name) {
  const fs::path path = fs::path(config.out_dir) / name;
  if (!fs::exists(path)) return nullptr;
  return ParseJson(ReadFile(path.string()), name);
}

StageResult Report(const RunConfig& config) {
  StageResult r{"report", {}, {}};
  Writer w(config, &r);
  json artifacts = ReadManifest(config).at("artifacts");
  artifacts.erase("report.json");
  json summary = json::object();
  if (json e = OptionalJson(config, "evaluation.json"); !e.is_null()) {
    summary["evaluation"] = e;
    if (e.contains("BIASED") && e.contains("DEBIASED")) {
      summary["debiased_better"] =
          e["DEBIASED"]["mean_score"].get<double>() > e["BIASED"]["mean_score"].get<double>();
    }
  }
  if (json b = OptionalJson(config, "bench_summary.json"); !b.is_null()) {
    summary["bench"] = {{"scales", b["scales"]},
                        {"data_efficiency", b["data_efficiency"]},
                        {"fits", b["fits"]}};
  }
  if (json s = OptionalJson(config, "scaling_fit.json"); !s.is_null()) summary["scaling"] = s;
  if (json d = OptionalJson(config, "debias_report.json"); !d.is_null()) summary["debias"] = d;
  json echoed = config.source;
  echoed.erase("out");
  r.summary = {{"config", std::move(echoed)},
               {"artifacts", std::move(artifacts)},
               {"summary", std::move(summary)}};
  w.Json("report.json", r.summary);
  return r;
}

StageResult RunOne(const std::string& stage, const RunConfig& config) {
  if (stage == "generate") return Generate(config);
  if (stage == "sample") return Sample(config);
  if (stage == "stats") return Stats(config);
  if (stage == "train-vm") return TrainVmStage(config);
  if (stage == "debias") return DebiasStage(config);
  if (stage == "train-policy") return TrainPolicyFor(config, config.train_condition);
  if (stage == "evaluate") return Evaluate(config);
  if (stage == "bench") return Bench(config);
  if (stage == "fit-scaling") return FitScaling(config);
  if (stage == "report") return Report(config);
  Fail(ErrorCode::kConfig, "unknown stage '" + stage + "'");
}

StageResult RunTracked(const std::string& stage, const RunConfig& config,
                       const std::function<StageResult()>& body) {
  try {
    StageResult r = body();
    UpdateManifest(config, r);
    return r;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

StageResult Pipeline(const RunConfig& config) {
  StageResult all{"pipeline", {}, json::object()};
  auto run = [&](const std::string& stage, const std::function<StageResult()>& body) {
    StageResult r = RunTracked(stage, config, body);
    all.artifacts.insert(all.artifacts.end(), r.artifacts.begin(), r.artifacts.end());
    return r;
  };
  if (config.inputs.dataset.empty()) run("generate", [&] { return Generate(config); });
  run("stats", [&] { return Stats(config); });
  run("train-vm", [&] { return TrainVmStage(config); });
  run("debias", [&] { return DebiasStage(config); });
  for (Condition c : {Condition::kBiased, Condition::kDebiased}) {
    run("train-policy", [&] { return TrainPolicyFor(config, c); });
  }
  run("evaluate", [&] { return Evaluate(config); });
  run("bench", [&] { return Bench(config); });
  run("fit-scaling", [&] {
    RunConfig c = config;
    c.inputs.scaling.clear();
    return FitScaling(c);
  });
  StageResult report = run("report", [&] { return Report(config); });
  all.summary = report.summary.at("summary");
  return all;
}

}  // namespace

const std::vector<std::string>& StageNames() {
  static const std::vector<std::string> kNames{
      "generate", "sample", "stats",       "train-vm", "debias",  "train-policy",
      "evaluate", "bench",  "fit-scaling", "report",   "pipeline"};
  return kNames;
}

StageResult RunStage(const std::string& stage, const RunConfig& config) {
  if (stage == "pipeline") return Pipeline(config);
  return RunTracked(stage, config, [&] { return RunOne(stage, config); });
}

json LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kConfig, "config file '" + path + "' does not exist");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    json j = json::parse(buf.str());
    if (!j.is_object()) Fail(ErrorCode::kConfig, "config root must be an object");
    return j;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, "cannot parse config '" + path + "': " + e.what());
  }
}

RunConfig ResolveRunConfig(const json& file, const json& overrides) {
  json j = file.is_null() ? json::object() : file;
  if (!overrides.is_null()) j.merge_patch(overrides);
  RunConfig c;
  c.source = j;
  try {
    if (j.contains("out") && !j["out"].is_null()) {
      c.out_dir = j["out"].get<std::string>();
    } else if (const char* env = std::getenv("DEMODEBIAS_OUT"); env && *env) {
      c.out_dir = env;
    } else {
      c.out_dir = "demodebias_out";
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad 'out': ") + e.what());
  }
  c.seed = Get<std::uint64_t>(j, "seed", 0);
  c.workers = Get<int>(j, "workers", 1);
  c.chunk_size = Get<int>(j, "chunk_size", 30);
  c.stride = Get<int>(j, "stride", 1);
  if (c.workers < 1) Fail(ErrorCode::kConfig, "workers must be >= 1");
  if (c.chunk_size < 2) Fail(ErrorCode::kConfig, "chunk_size must be >= 2");
  if (c.stride < 1) Fail(ErrorCode::kConfig, "stride must be >= 1");

  json world = j.contains("world") ? j["world"] : json::object();
  if (world.is_string()) {
    const std::string path = world.get<std::string>();
    if (!fs::exists(path)) Fail(ErrorCode::kConfig, "world config '" + path + "' does not exist");
    world = ParseJson(ReadFile(path), "world config");
  }
  c.world = WorldFromJson(world);
  c.world.Validate();

  const json dataset = Section(j, "dataset");
  c.n_demos = Get<int>(dataset, "n", 100);
  c.n_tasks = Get<int>(dataset, "tasks", 1);
  if (c.n_demos < 1) Fail(ErrorCode::kConfig, "dataset.n must be >= 1");
  if (c.n_tasks < 1) Fail(ErrorCode::kConfig, "dataset.tasks must be >= 1");
  c.mix = MixFromJson(dataset.contains("mix") ? dataset["mix"] : json("two-speed"));
  StratifiedCounts(c.mix, c.n_demos);  // rejects bad weights before any stage runs

  json sampling = Section(j, "sampling");
  if (!sampling.contains("seed")) sampling["seed"] = DeriveStream(c.seed, "sample");
  c.sampling = SamplingSpecFromJson(sampling);

  c.vm = VmTrainConfigFromJson(Section(j, "vm"));
  c.vm.stride = Get<int>(Section(j, "vm"), "stride", c.stride);
  c.policy = PolicyTrainConfigFromJson(Section(j, "policy"));
  json debias = Section(j, "debias");
  if (!debias.contains("chunk_size")) debias["chunk_size"] = c.chunk_size;
  if (!debias.contains("stride")) debias["stride"] = c.stride;
  const bool explicit_discrete = debias.contains("discrete_dims");
  c.debias = DebiasConfigFromJson(debias, kActionDim);
  if (!explicit_discrete) c.debias.discrete_dims[kGripDim] = true;
  if (c.debias.chunk_size != c.chunk_size) {
    Fail(ErrorCode::kConfig, "debias.chunk_size differs from chunk_size");
  }

  const json tp = Section(j, "train_policy");
  c.train_condition = ConditionFromName(Get<std::string>(tp, "condition", "DEBIASED"));
  const json ev = Section(j, "evaluate");
  c.eval_trials = Get<int>(ev, "trials", 20);
  c.max_steps = Get<int>(ev, "max_steps", 300);
  c.horizon = Get<int>(ev, "horizon", 0);
  if (c.eval_trials < 1) Fail(ErrorCode::kConfig, "evaluate.trials must be >= 1");
  if (c.max_steps < 1) Fail(ErrorCode::kConfig, "evaluate.max_steps must be >= 1");
  if (c.horizon < 0 || c.horizon > c.chunk_size) {
    Fail(ErrorCode::kConfig, "evaluate.horizon must be in [0, chunk_size]");
  }

  // The benchmark inherits the shared settings unless it overrides them.
  json bench = Section(j, "bench");
  json shared = {{"world", WorldToJson(c.world)},
                 {"mix", MixToJson(c.mix)},
                 {"chunk_size", c.chunk_size},
                 {"sample_stride", c.stride},
                 {"max_steps", c.max_steps},
                 {"horizon", c.horizon},
                 {"vm", VmTrainConfigToJson(c.vm)},
                 {"policy", PolicyTrainConfigToJson(c.policy)},
                 {"debias", DebiasConfigToJson(c.debias)},
                 {"seed", c.seed},
                 {"workers", c.workers}};
  shared.merge_patch(bench);
  c.bench = BenchConfigFromJson(shared);

  const json inputs = Section(j, "inputs");
  c.inputs.dataset = Get<std::string>(inputs, "dataset", "");
  c.inputs.stats = Get<std::string>(inputs, "stats", "");
  c.inputs.vm = Get<std::string>(inputs, "vm", "");
  c.inputs.samples = Get<std::string>(inputs, "samples", "");
  c.inputs.policy = Get<std::string>(inputs, "policy", "");
  c.inputs.scaling = Get<std::string>(inputs, "scaling", "");
  for (const std::string* p : {&c.inputs.dataset, &c.inputs.stats, &c.inputs.vm,
                               &c.inputs.samples, &c.inputs.policy, &c.inputs.scaling}) {
    if (!p->empty() && !fs::exists(*p)) {
      Fail(ErrorCode::kConfig, "input '" + *p + "' does not exist");
    }
  }
  return c;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kInfeasibleWorld:
    case ErrorCode::kInvalidWeights:
      return 2;
    default:
      return 3;
  }
}

json StageResultToJson(const StageResult& r) {
  json artifacts = json::array();
  for (const Artifact& a : r.artifacts) {
    artifacts.push_back({{"name", a.name}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  }
  return json{{"stage", r.stage}, {"artifacts", std::move(artifacts)}, {"summary", r.summary}};
}

json ErrorToJson(ErrorCode code, const std::string& message, const std::string& stage) {
  json e = {{"code", ErrorCodeName(code)}, {"message", message}, {"exit_code", ExitCodeFor(code)}};
  if (!stage.empty()) e["stage"] = stage;
  return json{{"error", std::move(e)}};
}

}  // namespace demodebias
