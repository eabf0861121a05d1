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

#include <cmath>
#include <sstream>

#include "error.hpp"
#include "test_util.hpp"
#include "trajectory.hpp"

namespace dd = demodebias;
using dd::testing::BruteVelocity;
using dd::testing::MakeDemo;

namespace {

dd::Dataset TwoDimDataset() {
  dd::Matrix a(4, 2);
  a << -2.0, 0.3, 1.0, 0.3, 2.0, 0.3, 0.5, 0.3;
  dd::Dataset ds;
  ds.chunk_size = 2;
  ds.demos.push_back(MakeDemo(a, {true, true}));
  return ds;
}

}  // namespace

TEST_CASE("stats take per-dimension extrema") {
  const dd::NormalizationStats s = dd::ComputeNormalizationStats(TwoDimDataset());
  CHECK(s.action_min[0] == -2.0);
  CHECK(s.action_max[0] == 2.0);
  CHECK(s.action_min[1] == 0.3);
  CHECK(s.action_max[1] == 0.3 + dd::kDegenerateEpsilon);
}

TEST_CASE("degenerate dimension normalizes to -1") {
  const dd::NormalizationStats s = dd::ComputeNormalizationStats(TwoDimDataset());
  dd::Matrix v(1, 2);
  v << 0.0, 0.3;
  CHECK(dd::NormalizeMatrix(v, s)(0, 1) == doctest::Approx(-1.0));
}

TEST_CASE("velocity stats come from every length-T chunk") {
  // Two demos with per-step normalized speed 0.1 and 0.2 over 4 chunks of T=8;
  // the oracle enumerates chunks by hand.
  dd::Dataset ds;
  ds.chunk_size = 8;
  dd::Matrix slow = dd::Matrix::Constant(10, 1, 0.1);
  dd::Matrix fast = dd::Matrix::Constant(9, 1, 0.2);
  slow(0, 0) = -1.0;  // pins action_min
  fast(8, 0) = 1.0;   // pins action_max
  ds.demos.push_back(MakeDemo(slow, {true}, "a"));
  ds.demos.push_back(MakeDemo(fast, {true}, "b"));
  const dd::NormalizationStats s = dd::ComputeNormalizationStats(ds);
  double lo = 1e300, hi = -1e300;
  for (const auto& d : ds.demos) {
    for (int t = 0; t + 8 <= d.length(); ++t) {
      const double v = BruteVelocity(d.actions.middleRows(t, 8), d.eef_mask, s);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  CHECK(s.velocity_min == doctest::Approx(lo).epsilon(1e-12));
  CHECK(s.velocity_max == doctest::Approx(hi).epsilon(1e-12));
  CHECK(s.velocity_min == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(s.velocity_max == doctest::Approx(2.4).epsilon(1e-9));
}

TEST_CASE("stats errors") {
  dd::Dataset empty;
  CHECK_THROWS_AS(dd::ComputeNormalizationStats(empty), dd::Error);
  dd::Dataset bad = TwoDimDataset();
  bad.demos[0].actions(1, 0) = std::nan("");
  try {
    dd::ComputeNormalizationStats(bad);
    FAIL("expected NonFiniteValue");
  } catch (const dd::Error& e) {
    CHECK(e.code() == dd::ErrorCode::kNonFiniteValue);
  }
}

TEST_CASE("normalize_actions endpoints, affine map and clamp") {
  dd::NormalizationStats s;
  s.action_min = dd::Vector::Constant(1, 0.0);
  s.action_max = dd::Vector::Constant(1, 4.0);
  s.velocity_min = 0.0;
  s.velocity_max = 1.0;
  dd::Matrix v(5, 1);
  v << 4.0, 0.0, 2.0, 3.0, 5.0;
  const dd::Matrix n = dd::NormalizeActions(dd::ActionChunk{0, v}, s).values;
  CHECK(n(0, 0) == 1.0);
  CHECK(n(1, 0) == -1.0);
  CHECK(n(2, 0) == 0.0);
  CHECK(n(3, 0) == 0.5);
  CHECK(n(4, 0) == 1.0);
}

TEST_CASE("normalize errors") {
  dd::NormalizationStats missing;
  dd::Matrix v = dd::Matrix::Zero(2, 2);
  CHECK_THROWS_AS(dd::NormalizeActions(dd::ActionChunk{0, v}, missing), dd::Error);
  try {
    dd::NormalizeActions(dd::ActionChunk{0, v}, dd::testing::IdentityStats(3));
    FAIL("expected DimensionMismatch");
  } catch (const dd::Error& e) {
    CHECK(e.code() == dd::ErrorCode::kDimensionMismatch);
  }
}

TEST_CASE("normalize then denormalize round-trips in-range values") {
  dd::Rng rng(3);
  dd::NormalizationStats s;
  s.action_min = dd::Vector(3);
  s.action_max = dd::Vector(3);
  s.action_min << -0.7, 2.0, -100.0;
  s.action_max << 0.4, 9.5, 250.0;
  s.velocity_min = 0.0;
  s.velocity_max = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    dd::Matrix v(4, 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) v(i, j) = rng.Uniform(s.action_min[j], s.action_max[j]);
    const dd::Matrix back = dd::DenormalizeMatrix(dd::NormalizeMatrix(v, s), s);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(back(i, j) - v(i, j)) <= 1e-12 * std::max(1.0, std::abs(v(i, j))));
      }
  }
}

TEST_CASE("velocity metric examples") {
  const auto id = dd::testing::IdentityStats(2);
  CHECK(dd::VelocityMetric(dd::ActionChunk{0, dd::Matrix::Zero(3, 2)}, {true, true}, id) == 0.0);
  dd::Matrix v(3, 2);
  v << 0.5, -0.5, 0.25, 0.25, 0.0, 0.0;
  CHECK(dd::VelocityMetric(dd::ActionChunk{0, v}, {true, true}, id) == doctest::Approx(1.5));
  // Non-eef columns do not count.
  CHECK(dd::VelocityMetric(dd::ActionChunk{0, v}, {true, false}, id) == doctest::Approx(0.75));
}

TEST_CASE("velocity metric of L steps at 0.1 equals 0.1 L") {
  const auto id = dd::testing::IdentityStats(2);
  for (int L = 1; L <= 20; ++L) {
    dd::Matrix v = dd::Matrix::Zero(L, 2);
    v.col(1).setConstant(0.1);
    const double got = dd::VelocityMetric(dd::ActionChunk{0, v}, {true, true}, id);
    CHECK(got == doctest::Approx(BruteVelocity(v, {true, true}, id)).epsilon(1e-12));
    CHECK(got == doctest::Approx(0.1 * L).epsilon(1e-12));
  }
}

TEST_CASE("velocity metric is homogeneous and additive") {
  dd::Rng rng(11);
  const auto id = dd::testing::IdentityStats(3);
  const dd::Mask mask{true, false, true};
  for (int trial = 0; trial < 50; ++trial) {
    const dd::Matrix a = dd::testing::RandomMatrix(rng, 7, 3, -0.5, 0.5);
    const dd::Matrix b = dd::testing::RandomMatrix(rng, 4, 3, -0.5, 0.5);
    const double s = rng.Uniform(0.0, 2.0);
    const double va = dd::VelocityMetric(dd::ActionChunk{0, a}, mask, id);
    const double vb = dd::VelocityMetric(dd::ActionChunk{0, b}, mask, id);
    // With identity stats, in-range normalized entries equal raw entries.
    const dd::Matrix sa = a * s;
    CHECK(dd::VelocityMetric(dd::ActionChunk{0, sa}, mask, id) == doctest::Approx(s * va).epsilon(1e-12));
    dd::Matrix ab(11, 3);
    ab << a, b;
    CHECK(dd::VelocityMetric(dd::ActionChunk{0, ab}, mask, id) == doctest::Approx(va + vb).epsilon(1e-12));
  }
}

TEST_CASE("velocity metric errors") {
  const auto id = dd::testing::IdentityStats(2);
  try {
    dd::VelocityMetric(dd::ActionChunk{0, dd::Matrix(0, 2)}, {true, true}, id);
    FAIL("expected EmptyChunk");
  } catch (const dd::Error& e) {
    CHECK(e.code() == dd::ErrorCode::kEmptyChunk);
  }
  CHECK_THROWS_AS(dd::VelocityMetric(dd::ActionChunk{0, dd::Matrix::Zero(2, 2)}, {true, true},
                                     dd::NormalizationStats{}),
                  dd::Error);
}

TEST_CASE("extract_chunk slices") {
  dd::Vector u(2);
  u << 0.6, 0.8;
  dd::Matrix a(6, 2);
  for (int k = 0; k < 6; ++k) a.row(k) = (k * u).transpose();
  const dd::Demonstration d = MakeDemo(a, {true, true});
  CHECK(dd::ExtractChunk(d, 0, 6).values == a);
  CHECK(dd::ExtractChunk(d, 5, 1).values == a.bottomRows(1));
  const dd::ActionChunk c = dd::ExtractChunk(d, 2, 3);
  CHECK(c.start_index == 2);
  for (int k = 0; k < 3; ++k) {
    CHECK(c.values(k, 0) == (k + 2) * u[0]);
    CHECK(c.values(k, 1) == (k + 2) * u[1]);
  }
  try {
    dd::ExtractChunk(d, 4, 3);
    FAIL("expected OutOfRange");
  } catch (const dd::Error& e) {
    CHECK(e.code() == dd::ErrorCode::kOutOfRange);
  }
  CHECK_THROWS_AS(dd::ExtractChunk(d, -1, 1), dd::Error);
}

TEST_CASE("demonstration validation") {
  dd::Demonstration d = MakeDemo(dd::Matrix::Zero(1, 2), {true, true});
  CHECK_THROWS_AS(d.Validate(), dd::Error);  // N >= 2
  d = MakeDemo(dd::Matrix::Zero(3, 2), {false, false});
  CHECK_THROWS_AS(d.Validate(), dd::Error);  // mask selects nothing
  d = MakeDemo(dd::Matrix::Zero(3, 2), {true, true});
  CHECK_NOTHROW(d.Validate());
}

TEST_CASE("JSON Lines round trip") {
  dd::Rng rng(5);
  std::vector<dd::Demonstration> demos;
  demos.push_back(MakeDemo(dd::testing::RandomMatrix(rng, 5, 3, -1, 1), {true, true, false}, "x"));
  demos.push_back(MakeDemo(dd::testing::RandomMatrix(rng, 4, 3, -1, 1), {true, true, false}, "y"));
  demos[1].mode_labels = dd::ModeLabels{1, 0};
  std::stringstream buf;
  dd::WriteDemonstrations(buf, demos);
  const std::string text = buf.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  const auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
  for (const char* key : {"episode_id", "task_id", "skills", "eef_mask", "observations",
                          "actions", "mode_labels"}) {
    CHECK(first.contains(key));
  }
  CHECK(first["mode_labels"].is_null());
  const auto back = dd::ReadDemonstrations(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[0].actions == demos[0].actions);
  CHECK(back[1].observations == demos[1].observations);
  CHECK(back[1].mode_labels == demos[1].mode_labels);
  CHECK(back[0].eef_mask == demos[0].eef_mask);
}

TEST_CASE("stats JSON round trip") {
  const dd::NormalizationStats s = dd::ComputeNormalizationStats(TwoDimDataset());
  const dd::NormalizationStats b = dd::StatsFromJson(dd::StatsToJson(s));
  CHECK(b.action_min == s.action_min);
  CHECK(b.action_max == s.action_max);
  CHECK(b.velocity_min == s.velocity_min);
  CHECK(b.velocity_max == s.velocity_max);
}
