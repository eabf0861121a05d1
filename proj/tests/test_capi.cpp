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

// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "demodebias/demodebias.h"

namespace fs = std::filesystem;

namespace {

std::string TempDir(const char* name) {
  const fs::path p = fs::temp_directory_path() / (std::string("dd_capi_") + name);
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(dd_version()) > 0);
  CHECK(std::string(dd_status_name(DD_OK)) == "Ok");
  CHECK(std::string(dd_status_name(DD_ERR_TOO_NEAR_END)) == "TooNearEnd");
  CHECK(dd_exit_code(DD_OK) == 0);
  CHECK(dd_exit_code(DD_ERR_CONFIG) == 2);
  CHECK(dd_exit_code(DD_ERR_INVALID_WEIGHTS) == 2);
  CHECK(dd_exit_code(DD_ERR_DIVERGED_LOSS) == 3);
}

TEST_CASE("dataset generation, stats and metrics through handles") {
  dd_dataset* ds = nullptr;
  REQUIRE(dd_dataset_generate(nullptr, "two-speed", 8, 3, 30, &ds) == DD_OK);
  CHECK(dd_dataset_size(ds) == 8);
  int rows = 0, da = 0, dobs = 0;
  REQUIRE(dd_dataset_demo_shape(ds, 0, &rows, &da, &dobs) == DD_OK);
  CHECK(da == 3);
  CHECK(dobs == 7);
  std::vector<double> actions(static_cast<std::size_t>(rows * da));
  REQUIRE(dd_dataset_demo_actions(ds, 0, actions.data()) == DD_OK);

  dd_stats* stats = nullptr;
  REQUIRE(dd_stats_compute(ds, &stats) == DD_OK);
  char* js = nullptr;
  REQUIRE(dd_stats_to_json(stats, &js) == DD_OK);
  dd_stats* again = nullptr;
  CHECK(dd_stats_from_json(js, &again) == DD_OK);
  dd_string_free(js);
  dd_stats_free(again);

  const unsigned char mask[3] = {1, 1, 0};
  double v = 0.0;
  REQUIRE(dd_velocity_metric(actions.data(), 30, 3, mask, stats, &v) == DD_OK);
  CHECK(v > 0.0);
  int L = 0;
  REQUIRE(dd_search_chunk_length(actions.data(), rows, 3, mask, stats, 0, v, 30, 0.5, 1.5, &L) ==
          DD_OK);
  CHECK(L == 30);
  REQUIRE(dd_search_chunk_length(actions.data(), rows, 3, mask, stats, 0, 100.0, 30, 0.5, 1.5, &L) ==
          DD_OK);
  CHECK(L == 45);

  const unsigned char discrete[3] = {0, 0, 1};
  std::vector<double> out(30 * 3);
  REQUIRE(dd_rescale_chunk(actions.data(), rows, 3, 2, 40, 30, discrete, out.data()) == DD_OK);
  for (int c = 0; c < 2; ++c) {
    double src = 0.0, got = 0.0;
    for (int r = 2; r < 42; ++r) src += actions[static_cast<std::size_t>(r * 3 + c)];
    for (int r = 0; r < 30; ++r) got += out[static_cast<std::size_t>(r * 3 + c)];
    CHECK(std::abs(src - got) <= 1e-9);
  }

  dd_stats_free(stats);
  dd_dataset_free(ds);
}

TEST_CASE("power-law fit") {
  const double x[3] = {1e5, 2.5e5, 1e6};
  const double s[3] = {0.47, 0.53, 0.58};
  dd_power_law_fit f{};
  REQUIRE(dd_fit_power_law(x, s, 3, &f) == DD_OK);
  CHECK(f.alpha == doctest::Approx(-0.0994).epsilon(1e-3));
  CHECK(f.pearson_r <= -0.98);
  CHECK(f.n_points == 3);
  const double one[3] = {0.5, 0.6, 1.0};
  REQUIRE(dd_fit_power_law(x, one, 3, &f) == DD_OK);
  CHECK(f.n_excluded == 1);
}

TEST_CASE("errors set status, message and JSON") {
  CHECK(dd_dataset_generate(nullptr, "two-speed", 0, 1, 30, nullptr) == DD_ERR_INVALID_ARGUMENT);
  dd_dataset* ds = nullptr;
  CHECK(dd_dataset_generate(nullptr, "two-speed", 0, 1, 30, &ds) == DD_ERR_CONFIG);
  CHECK(ds == nullptr);
  CHECK(std::string(dd_last_error()).find("n_demos") != std::string::npos);
  const std::string j = dd_last_error_json();
  CHECK(j.find("\"ConfigError\"") != std::string::npos);
  CHECK(j.find("\"exit_code\":2") != std::string::npos);
  CHECK(dd_dataset_generate(nullptr, "no-such-mix", 4, 1, 30, &ds) == DD_ERR_CONFIG);
  CHECK(dd_dataset_load("/nonexistent/file.jsonl", 30, &ds) == DD_ERR_IO);
  const double a[4] = {0.1, 0.1, 0.1, 0.1};
  const unsigned char m[1] = {1};
  double v = 0.0;
  CHECK(dd_velocity_metric(a, 4, 1, m, nullptr, &v) == DD_ERR_INVALID_ARGUMENT);
  double out[8];
  CHECK(dd_rescale_chunk(a, 4, 1, 0, 0, 8, nullptr, out) == DD_ERR_DEGENERATE_LENGTH);
  char* res = nullptr;
  CHECK(dd_run_stage("frobnicate", nullptr, nullptr, &res) == DD_ERR_CONFIG);
  CHECK(res == nullptr);
}

TEST_CASE("stages run through the C API and models load back") {
  const std::string out = TempDir("stages");
  const std::string overrides =
      R"({"out": ")" + out + R"(", "seed": 4, "dataset": {"n": 6},
          "vm": {"train": {"optimizer": "adam", "learning_rate": 0.003, "max_steps": 200}},
          "policy": {"hidden": [32], "train": {"max_steps": 100}}})";
  for (const char* stage : {"generate", "stats", "train-vm", "debias", "train-policy"}) {
    char* res = nullptr;
    const dd_status st = dd_run_stage(stage, nullptr, overrides.c_str(), &res);
    CHECK_MESSAGE(st == DD_OK, stage << ": " << dd_last_error());
    dd_string_free(res);
  }
  dd_velocity_model* vm = nullptr;
  REQUIRE(dd_vm_load((out + "/vm.json").c_str(), &vm) == DD_OK);
  double obs[7] = {0.4, 0.5, 0.15, 0.6, 0.9, 0.5, 0.0};
  double pred = -1.0;
  CHECK(dd_vm_predict(vm, obs, 7, &pred) == DD_OK);
  CHECK(pred >= 0.0);
  CHECK(dd_vm_predict(vm, obs, 6, &pred) == DD_ERR_DIMENSION_MISMATCH);
  dd_vm_free(vm);

  dd_policy* policy = nullptr;
  REQUIRE(dd_policy_load((out + "/policy_debiased.json").c_str(), &policy) == DD_OK);
  int T = 0, da = 0, dobs = 0;
  REQUIRE(dd_policy_shape(policy, &T, &da, &dobs) == DD_OK);
  CHECK(T == 30);
  CHECK(da == 3);
  CHECK(dobs == 7);
  std::vector<double> chunk(static_cast<std::size_t>(T * da));
  CHECK(dd_policy_predict(policy, obs, 7, chunk.data()) == DD_OK);
  for (double c : chunk) CHECK(std::isfinite(c));
  dd_policy_free(policy);
  fs::remove_all(out);
}
