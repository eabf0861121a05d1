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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "hash.hpp"
#include "pipeline.hpp"
#include "world.hpp"

namespace dd = demodebias;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string TempDir(const char* name) {
  const fs::path p = fs::temp_directory_path() / (std::string("dd_pipeline_") + name);
  fs::remove_all(p);
  return p.string();
}

json Small(const std::string& out) {
  return json{{"out", out},
              {"seed", 3},
              {"dataset", {{"n", 6}}},
              {"vm", {{"train", {{"optimizer", "adam"}, {"learning_rate", 0.003}, {"max_steps", 200}}}}},
              {"policy", {{"hidden", {32}}, {"train", {{"max_steps", 100}}}}},
              {"evaluate", {{"trials", 2}}}};
}

json ReadJson(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST_CASE("overrides beat the file and the environment sets the default root") {
  const json file = {{"seed", 1}, {"chunk_size", 20}, {"dataset", {{"n", 10}}}};
  const dd::RunConfig a = dd::ResolveRunConfig(file, json{{"seed", 9}});
  CHECK(a.seed == 9);
  CHECK(a.chunk_size == 20);
  CHECK(a.debias.chunk_size == 20);
  CHECK(a.bench.chunk_size == 20);
  CHECK(a.n_demos == 10);
  CHECK(a.debias.discrete_dims == dd::Mask{false, false, true});
  ::setenv("DEMODEBIAS_OUT", "/tmp/dd_env_root", 1);
  CHECK(dd::ResolveRunConfig(file, json::object()).out_dir == "/tmp/dd_env_root");
  CHECK(dd::ResolveRunConfig(file, json{{"out", "x"}}).out_dir == "x");
  ::unsetenv("DEMODEBIAS_OUT");
  CHECK(dd::ResolveRunConfig(file, json::object()).out_dir == "demodebias_out");
}

TEST_CASE("config validation") {
  auto code = [](const json& j) {
    try {
      dd::ResolveRunConfig(j, json::object());
    } catch (const dd::Error& e) {
      return e.code();
    }
    return dd::ErrorCode::kIo;  // sentinel: no error
  };
  CHECK(code(json{{"dataset", {{"n", 0}}}}) == dd::ErrorCode::kConfig);
  CHECK(code(json{{"chunk_size", 1}}) == dd::ErrorCode::kConfig);
  CHECK(code(json{{"workers", 0}}) == dd::ErrorCode::kConfig);
  CHECK(code(json{{"inputs", {{"dataset", "/no/such/file"}}}}) == dd::ErrorCode::kConfig);
  CHECK(code(json{{"world", "/no/such/world.json"}}) == dd::ErrorCode::kConfig);
  CHECK(code(json{{"world", {{"obstacle_radius", 0.45}}}}) == dd::ErrorCode::kInfeasibleWorld);
  CHECK(code(json{{"dataset", {{"mix", json::array({{{"weight", 0.3}, {"profile", dd::ProfileToJson(dd::ExpertProfile{})}}})}}}}) ==
        dd::ErrorCode::kInvalidWeights);
  CHECK(code(json{{"debias", {{"chunk_size", 12}}}}) == dd::ErrorCode::kConfig);
  CHECK(dd::ExitCodeFor(dd::ErrorCode::kConfig) == 2);
  CHECK(dd::ExitCodeFor(dd::ErrorCode::kInfeasibleWorld) == 2);
  CHECK(dd::ExitCodeFor(dd::ErrorCode::kTooNearEnd) == 3);
}

TEST_CASE("stages write hashed artifacts into the manifest") {
  const std::string out = TempDir("stages");
  const dd::RunConfig c = dd::ResolveRunConfig(Small(out), json::object());
  for (const char* stage : {"generate", "stats", "train-vm", "debias"}) {
    const dd::StageResult r = dd::RunStage(stage, c);
    CHECK(r.stage == stage);
    CHECK_FALSE(r.artifacts.empty());
  }
  const json manifest = ReadJson(out + "/manifest.json");
  for (const char* name : {"dataset.jsonl", "generate_manifest.json", "stats.json", "vm.json",
                           "vm_curve.csv", "debiased.jsonl", "debias_report.json"}) {
    REQUIRE(manifest["artifacts"].contains(name));
    CHECK(manifest["artifacts"][name]["sha256"] == dd::Sha256File(out + "/" + name));
  }
  const json gm = ReadJson(out + "/generate_manifest.json");
  CHECK(gm["n"] == 6);
  // Debiased records carry the documented keys.
  std::ifstream in(out + "/debiased.jsonl");
  std::string line;
  REQUIRE(std::getline(in, line));
  const json rec = json::parse(line);
  for (const char* k : {"obs", "actions", "L", "source", "vm_pred"}) CHECK(rec.contains(k));
  CHECK(rec["actions"].size() == 30);
  fs::remove_all(out);
}

TEST_CASE("a failing stage names itself and keeps earlier outputs") {
  const std::string out = TempDir("fail");
  const dd::RunConfig c = dd::ResolveRunConfig(Small(out), json::object());
  dd::RunStage("generate", c);
  try {
    dd::RunStage("debias", c);  // no stats or VM yet
    FAIL("expected a stage error");
  } catch (const dd::StageError& e) {
    CHECK(e.stage() == "debias");
    const json j = dd::ErrorToJson(e.code(), e.what(), e.stage());
    CHECK(j["error"]["stage"] == "debias");
    CHECK(j["error"]["exit_code"] == 3);
  }
  CHECK(fs::exists(out + "/dataset.jsonl"));
  fs::remove_all(out);
}

TEST_CASE("episode and task sampling on a 20-task dataset") {
  const std::string out = TempDir("sample");
  json cfg = Small(out);
  cfg["dataset"] = {{"n", 1000}, {"tasks", 20}, {"mix", "single-speed"}};
  dd::RunStage("generate", dd::ResolveRunConfig(cfg, json::object()));
  cfg["sampling"] = {{"strategy", "episode"}, {"fraction", 0.1}};
  auto r = dd::RunStage("sample", dd::ResolveRunConfig(cfg, json::object()));
  CHECK(r.summary["output"]["per_task"].size() == 20);
  int total = 0;
  for (const auto& [task, n] : r.summary["output"]["per_task"].items()) {
    CHECK(n == 5);
    total += n.get<int>();
  }
  CHECK(total == 100);
  cfg["sampling"] = {{"strategy", "task"}, {"fraction", 0.1}, {"relevance_skills", {"fold"}}};
  r = dd::RunStage("sample", dd::ResolveRunConfig(cfg, json::object()));
  CHECK(r.summary["output"]["per_task"].size() == 2);
  total = 0;
  for (const auto& [task, n] : r.summary["output"]["per_task"].items()) total += n.get<int>();
  CHECK(total == 100);
  fs::remove_all(out);
}

TEST_CASE("fit-scaling reads a CSV") {
  const std::string out = TempDir("fit");
  fs::create_directories(out);
  {
    std::ofstream csv(out + "/points.csv");
    csv << "x,score,label\n100000,0.47,100K\n250000,0.53,250K\n1000000,0.58,1M\n";
  }
  json cfg = Small(out);
  cfg["inputs"] = {{"scaling", out + "/points.csv"}};
  const auto r = dd::RunStage("fit-scaling", dd::ResolveRunConfig(cfg, json::object()));
  const json fit = ReadJson(out + "/scaling_fit.json");
  const double alpha = fit.contains("alpha") ? fit["alpha"].get<double>()
                                             : fit["fit"]["alpha"].get<double>();
  CHECK(alpha >= -0.13);
  CHECK(alpha <= -0.07);
  CHECK(fs::exists(out + "/scaling_fit.svg"));
  (void)r;
  fs::remove_all(out);
}

TEST_CASE("hashing") {
  CHECK(dd::Sha256Hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(dd::Sha256Hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
