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

// Deterministic 2D point-mass pick-and-deliver world with scripted experts.
//
// Layout: the agent starts in `start_region`, moves to the object, grasps it,
// carries it around a circular obstacle through the upper (LEFT) or lower
// (RIGHT) corridor and releases it at the goal. The object sits above the
// centre line for LEFT demonstrations and below it for RIGHT ones, so the
// corridor choice is visible in the observation.
//
// Observation (Do = 7): agent xy, object xy, goal xy, carry flag.
// Action (Da = 3): agent dx, dy, grip command (> 0.5 closes the gripper).

#ifndef DEMODEBIAS_WORLD_HPP_
#define DEMODEBIAS_WORLD_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "rng.hpp"
#include "trajectory.hpp"

namespace demodebias {

using Vec2 = Eigen::Vector2d;

inline constexpr int kObservationDim = 7;
inline constexpr int kActionDim = 3;
inline constexpr int kGripDim = 2;

struct Box {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();

  Vec2 center() const { return 0.5 * (lo + hi); }
  bool Contains(const Vec2& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

struct WorldConfig {
  Vec2 obstacle_center{0.62, 0.5};
  double obstacle_radius = 0.1;
  Box start_region{{0.35, 0.40}, {0.45, 0.60}};
  Box goal_region{{0.88, 0.48}, {0.92, 0.52}};
  Vec2 object_center{0.15, 0.5};
  // Lateral object offset: +offset for LEFT, -offset for RIGHT.
  double object_mode_offset = 0.1;
  // Half-width of the uniform box perturbing the object position.
  double object_perturbation = 0.02;
  double goal_tolerance = 0.03;
  // Corridor waypoints sit at obstacle_center +- (corridor_half_length,
  // obstacle_radius + corridor_clearance).
  double corridor_half_length = 0.1;
  double corridor_clearance = 0.07;
  double base_speed = 0.011;
  // Actuator limit in multiples of base_speed.
  double max_speed_factor = 4.0;
  double control_rate = 10.0;
  // Steps after the release row: the expert backs away from the goal on the
  // side of its corridor. 0 leaves a single stationary release row.
  int retreat_steps = 30;
  std::string task_id = "deliver";
  std::uint64_t seed = 0;

  Vec2 goal() const { return goal_region.center(); }

  // Throws kInfeasibleWorld / kConfig.
  void Validate() const;
};

enum class SpatialMode { kLeft = 0, kRight = 1 };

struct PauseSpec {
  int segment = 0;
  int steps = 0;
};

struct ExpertProfile {
  SpatialMode spatial_mode = SpatialMode::kLeft;
  double speed_multiplier = 1.0;
  std::optional<PauseSpec> pause;
  double waypoint_jitter_std = 0.0;
  int velocity_id = 0;
  std::vector<std::string> skills{"pick", "place"};

  void Validate() const;
};

struct WorldState {
  Vec2 agent = Vec2::Zero();
  Vec2 object = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
  bool carrying = false;
};

Vector Observe(const WorldState& state);

// Path segments of an expert plan, in order.
enum Segment { kApproach = 0, kToCorridor = 1, kCorridor = 2, kToGoal = 3 };
inline constexpr int kNumSegments = 4;

// Corridor entry/exit waypoints for a mode.
std::pair<Vec2, Vec2> CorridorWaypoints(const WorldConfig& world,
                                        SpatialMode mode);

// Samples agent and object placement for a given side.
WorldState SampleInitialState(const WorldConfig& world, SpatialMode mode,
                              Rng& rng);

// Advances the world by one action (grip, then move with obstacle
// projection, then carry).
WorldState Step(const WorldConfig& world, const WorldState& state,
                const Vector& action);

// Generates one expert demonstration, deterministic in
// (world.seed, rng_stream).
Demonstration GenerateDemo(const WorldConfig& world,
                           const ExpertProfile& profile,
                           std::uint64_t rng_stream);

// ---- Policies and rollouts ----------------------------------------------

class ChunkPolicy {
 public:
  virtual ~ChunkPolicy() = default;
  // Returns raw actions (rows x Da) to execute from `observation`.
  virtual Matrix PredictChunk(const Vector& observation) const = 0;
};

// Replans the scripted expert path from the observed state each call.
// Pauses and jitter are not reproduced.
class ScriptedExpertPolicy : public ChunkPolicy {
 public:
  ScriptedExpertPolicy(WorldConfig world, ExpertProfile profile, int chunk_size)
      : world_(std::move(world)),
        profile_(std::move(profile)),
        chunk_size_(chunk_size) {}

  Matrix PredictChunk(const Vector& observation) const override;

 private:
  WorldConfig world_;
  ExpertProfile profile_;
  int chunk_size_;
};

class ZeroPolicy : public ChunkPolicy {
 public:
  explicit ZeroPolicy(int chunk_size) : chunk_size_(chunk_size) {}
  Matrix PredictChunk(const Vector&) const override {
    return Matrix::Zero(chunk_size_, kActionDim);
  }

 private:
  int chunk_size_;
};

struct RolloutScore {
  std::vector<double> step_scores;  // each in {0, 0.5, 1}
  double trial_score = 0.0;
};

// Mean of step scores.
RolloutScore MakeScore(std::vector<double> step_scores);

struct Rollout {
  std::vector<WorldState> states;
  RolloutScore score;
  bool step_budget_exceeded = false;
};

// Executes `horizon` steps of each predicted chunk open loop, then
// re-observes. Steps: (1) grasp object, (2) release it within tolerance of
// the goal. A step scores 1 when achieved during the first visit of its
// region, 0.5 after leaving and re-entering, 0 otherwise.
Rollout RolloutPolicy(const WorldConfig& world, const ChunkPolicy& policy,
                      const WorldState& initial_state, int max_steps,
                      int horizon);

// ---- Datasets -------------------------------------------------------------

struct WeightedProfile {
  ExpertProfile profile;
  double weight = 0.0;
};

// Stratified profile counts (largest remainder), assignment order shuffled
// by seed; every demo gets its own derived stream.
Dataset BuildBenchmarkDataset(const WorldConfig& world,
                              const std::vector<WeightedProfile>& mix,
                              int n_demos, std::uint64_t seed, int chunk_size);

// Largest-remainder integer allocation of n over weights.
std::vector<int> StratifiedCounts(const std::vector<WeightedProfile>& mix,
                                  int n_demos);

// Named mixes: "two-speed", "single-speed", "two-speed-left",
// "single-speed-left", "pause".
std::vector<WeightedProfile> PresetMix(const std::string& name);

nlohmann::json WorldToJson(const WorldConfig& world);
WorldConfig WorldFromJson(const nlohmann::json& j);
nlohmann::json ProfileToJson(const ExpertProfile& profile);
ExpertProfile ProfileFromJson(const nlohmann::json& j);
nlohmann::json MixToJson(const std::vector<WeightedProfile>& mix);
std::vector<WeightedProfile> MixFromJson(const nlohmann::json& j);

}  // namespace demodebias

#endif  // DEMODEBIAS_WORLD_HPP_
