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

// demodebias command-line tool. Thin wrapper over the C API: flags become a
// JSON override object merged over the --config file.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "demodebias/demodebias.h"

namespace {

using nlohmann::json;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
};

struct Overrides {
  std::optional<int> n, tasks, n_seeds, trials;
  std::optional<std::string> mix, strategy, condition;
  std::optional<double> fraction;
  std::vector<std::string> skills;
  std::vector<int> scales;
  std::optional<std::string> dataset, stats, vm, samples, policy, input;
};

void AddCommon(CLI::App* cmd, Common* c) {
  cmd->add_option("--config", c->config, "JSON run configuration");
  cmd->add_option("--seed", c->seed, "global seed");
  cmd->add_option("--out", c->out, "output directory (default $DEMODEBIAS_OUT)");
  cmd->add_option("--workers", c->workers, "benchmark worker threads");
}

json BuildOverrides(const Common& c, const Overrides& o) {
  json j = json::object();
  if (c.seed) j["seed"] = *c.seed;
  if (c.out) j["out"] = *c.out;
  if (c.workers) j["workers"] = *c.workers;
  if (o.n) j["dataset"]["n"] = *o.n;
  if (o.tasks) j["dataset"]["tasks"] = *o.tasks;
  if (o.mix) j["dataset"]["mix"] = *o.mix;
  if (o.strategy) j["sampling"]["strategy"] = *o.strategy;
  if (o.fraction) j["sampling"]["fraction"] = *o.fraction;
  if (!o.skills.empty()) j["sampling"]["relevance_skills"] = o.skills;
  if (o.condition) j["train_policy"]["condition"] = *o.condition;
  if (!o.scales.empty()) j["bench"]["data_scales"] = o.scales;
  if (o.n_seeds) j["bench"]["n_seeds"] = *o.n_seeds;
  if (o.trials) j["bench"]["trials_per_seed"] = *o.trials;
  if (o.dataset) j["inputs"]["dataset"] = *o.dataset;
  if (o.stats) j["inputs"]["stats"] = *o.stats;
  if (o.vm) j["inputs"]["vm"] = *o.vm;
  if (o.samples) j["inputs"]["samples"] = *o.samples;
  if (o.policy) j["inputs"]["policy"] = *o.policy;
  if (o.input) j["inputs"]["scaling"] = *o.input;
  return j;
}

int PrintError(const std::string& code, const std::string& message, int exit_code) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}, {"exit_code", exit_code}}}}
                   .dump()
            << std::endl;
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Velocity debiasing of demonstration datasets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dd_version()));

  Common common;
  Overrides o;
  struct Stage {
    const char* name;
    const char* help;
  };
  const std::vector<Stage> stages{
      {"generate", "generate a synthetic demonstration dataset"},
      {"sample", "curate a dataset by task- or episode-based sampling"},
      {"stats", "compute normalization statistics"},
      {"train-vm", "train the velocity model"},
      {"debias", "debias training chunks with a trained velocity model"},
      {"train-policy", "train a chunk policy on biased or debiased samples"},
      {"evaluate", "roll out trained policies"},
      {"bench", "run the biased vs. debiased benchmark grid"},
      {"fit-scaling", "fit a power law to (x, score) points"},
      {"report", "write report.json linking all artifacts"},
      {"pipeline", "run every stage in order"},
  };
  std::string selected;
  for (const Stage& s : stages) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    AddCommon(cmd, &common);
    const std::string name = s.name;
    cmd->callback([&selected, name] { selected = name; });
    if (name == "generate") {
      cmd->add_option("--n", o.n, "number of demonstrations");
      cmd->add_option("--mix", o.mix, "profile mix preset");
      cmd->add_option("--tasks", o.tasks, "number of task variants");
    }
    if (name == "sample") {
      cmd->add_option("--strategy", o.strategy, "task or episode")
          ->check(CLI::IsMember({"task", "episode"}));
      cmd->add_option("--fraction", o.fraction, "task or episode fraction");
      cmd->add_option("--skills", o.skills, "relevance skills")->delimiter(',');
    }
    if (name == "train-policy") {
      cmd->add_option("--condition", o.condition, "BIASED or DEBIASED");
    }
    if (name == "bench") {
      cmd->add_option("--scales", o.scales, "data scales")->delimiter(',');
      cmd->add_option("--n-seeds", o.n_seeds, "seeds per cell");
      cmd->add_option("--trials", o.trials, "trials per seed");
      cmd->add_option("--mix", o.mix, "profile mix preset");
    }
    if (name == "fit-scaling") {
      cmd->add_option("--input", o.input, "CSV with header x,score,label");
    }
    if (name != "generate" && name != "fit-scaling" && name != "report" && name != "bench") {
      cmd->add_option("--dataset", o.dataset, "input dataset (JSON Lines)");
    }
    if (name == "train-vm" || name == "debias" || name == "train-policy") {
      cmd->add_option("--stats", o.stats, "input stats.json");
    }
    if (name == "debias") cmd->add_option("--vm", o.vm, "input vm.json");
    if (name == "train-policy") cmd->add_option("--samples", o.samples, "debiased.jsonl");
    if (name == "evaluate") cmd->add_option("--policy", o.policy, "policy JSON to evaluate");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return PrintError("ConfigError", e.what(), 2);
  }

  const std::string overrides = BuildOverrides(common, o).dump();
  char* result = nullptr;
  const dd_status status =
      dd_run_stage(selected.c_str(), common.config.empty() ? nullptr : common.config.c_str(),
                   overrides.c_str(), &result);
  if (status != DD_OK) {
    std::cerr << dd_last_error_json() << std::endl;
    return dd_exit_code(status);
  }
  std::cout << result << std::endl;
  dd_string_free(result);
  return 0;
}
