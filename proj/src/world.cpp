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

#include "world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace demodebias {
namespace {

using nlohmann::json;

double BoxDiskGap(const Box& box, const Vec2& center, double radius) {
  const Vec2 nearest = center.cwiseMax(box.lo).cwiseMin(box.hi);
  return (nearest - center).norm() - radius;
}

double SegmentPointDistance(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (a + s * ab - p).norm();
}

const char* ModeName(SpatialMode mode) {
  return mode == SpatialMode::kLeft ? "LEFT" : "RIGHT";
}

SpatialMode ModeFromName(const std::string& name) {
  if (name == "LEFT") return SpatialMode::kLeft;
  if (name == "RIGHT") return SpatialMode::kRight;
  Fail(ErrorCode::kConfig, "spatial_mode must be LEFT or RIGHT, got '" + name + "'");
}

Vec2 ObjectNominal(const WorldConfig& world, SpatialMode mode) {
  const double side = mode == SpatialMode::kLeft ? 1.0 : -1.0;
  return world.object_center + Vec2(0.0, side * world.object_mode_offset);
}

struct Leg {
  Vec2 target;
  double grip = 0.0;
  int segment = 0;
};

// Carry legs remaining from `from`, chosen by x progress along the corridor.
std::vector<Leg> CarryLegs(const Vec2& from, const Vec2& w1, const Vec2& w2,
                           const Vec2& goal) {
  std::vector<Leg> legs;
  constexpr double kTol = 1e-9;
  if (from.x() < w1.x() - kTol) legs.push_back({w1, 1.0, kToCorridor});
  if (from.x() < w2.x() - kTol) legs.push_back({w2, 1.0, kCorridor});
  legs.push_back({goal, 1.0, kToGoal});
  return legs;
}

// Appends constant-speed steps along each leg. Every step has length
// `step_len` except the last one of a leg, which lands on the waypoint.
void AppendLegs(const Vec2& start, const std::vector<Leg>& legs,
                double step_len, const std::optional<PauseSpec>& pause,
                std::vector<Eigen::Vector3d>& out) {
  Vec2 pos = start;
  for (const Leg& leg : legs) {
    const Vec2 delta = leg.target - pos;
    const double len = delta.norm();
    const int n = len < 1e-12
                      ? 0
                      : std::max(1, static_cast<int>(std::ceil(len / step_len - 1e-9)));
    const bool pause_here = pause && pause->segment == leg.segment;
    const int pause_at = n / 2;
    Vec2 prev = pos;
    for (int k = 1; k <= n; ++k) {
      if (pause_here && k - 1 == pause_at) {
        for (int p = 0; p < pause->steps; ++p) out.emplace_back(0.0, 0.0, leg.grip);
      }
      const Vec2 next =
          k == n ? leg.target : Vec2(pos + (k * step_len / len) * delta);
      const Vec2 d = next - prev;
      out.emplace_back(d.x(), d.y(), leg.grip);
      prev = next;
    }
    if (pause_here && n == 0) {
      for (int p = 0; p < pause->steps; ++p) out.emplace_back(0.0, 0.0, leg.grip);
    }
    pos = leg.target;
  }
}

void CheckCorridor(const WorldConfig& world, const std::vector<Vec2>& path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double d =
        SegmentPointDistance(path[i], path[i + 1], world.obstacle_center);
    if (d <= world.obstacle_radius) {
      Fail(ErrorCode::kInfeasibleWorld,
           "corridor segment " + std::to_string(i) + " intersects the obstacle");
    }
  }
}

}  // namespace

void WorldConfig::Validate() const {
  if (!(obstacle_radius > 0.0)) Fail(ErrorCode::kConfig, "obstacle_radius must be > 0");
  if (!(goal_tolerance > 0.0)) Fail(ErrorCode::kConfig, "goal_tolerance must be > 0");
  if (!(base_speed > 0.0)) Fail(ErrorCode::kConfig, "base_speed must be > 0");
  if (!(max_speed_factor > 0.0)) Fail(ErrorCode::kConfig, "max_speed_factor must be > 0");
  if (retreat_steps < 0) Fail(ErrorCode::kConfig, "retreat_steps must be >= 0");
  if ((start_region.lo.array() > start_region.hi.array()).any() ||
      (goal_region.lo.array() > goal_region.hi.array()).any()) {
    Fail(ErrorCode::kConfig, "region lo must be <= hi");
  }
  if (BoxDiskGap(start_region, obstacle_center, obstacle_radius) <= 0.0) {
    Fail(ErrorCode::kInfeasibleWorld, "start region overlaps the obstacle");
  }
  if (BoxDiskGap(goal_region, obstacle_center, obstacle_radius) <= 0.0) {
    Fail(ErrorCode::kInfeasibleWorld, "goal region overlaps the obstacle");
  }
  for (SpatialMode mode : {SpatialMode::kLeft, SpatialMode::kRight}) {
    const Vec2 c = ObjectNominal(*this, mode);
    const Box object_box{c.array() - object_perturbation,
                         c.array() + object_perturbation};
    if (BoxDiskGap(object_box, obstacle_center, obstacle_radius) <= 0.0) {
      Fail(ErrorCode::kInfeasibleWorld, "object region overlaps the obstacle");
    }
    const auto [w1, w2] = CorridorWaypoints(*this, mode);
    CheckCorridor(*this, {c, w1, w2, goal()});
  }
}

void ExpertProfile::Validate() const {
  if (!(speed_multiplier > 0.0) || !std::isfinite(speed_multiplier)) {
    Fail(ErrorCode::kConfig, "speed_multiplier must be finite and > 0");
  }
  if (pause && (pause->steps < 0 || pause->segment < 0 ||
                pause->segment >= kNumSegments)) {
    Fail(ErrorCode::kConfig, "invalid pause spec");
  }
  if (!(waypoint_jitter_std >= 0.0)) {
    Fail(ErrorCode::kConfig, "waypoint_jitter_std must be >= 0");
  }
}

Vector Observe(const WorldState& s) {
  Vector o(kObservationDim);
  o << s.agent.x(), s.agent.y(), s.object.x(), s.object.y(), s.goal.x(),
      s.goal.y(), s.carrying ? 1.0 : 0.0;
  return o;
}

std::pair<Vec2, Vec2> CorridorWaypoints(const WorldConfig& world,
                                        SpatialMode mode) {
  const double side = mode == SpatialMode::kLeft ? 1.0 : -1.0;
  const double lateral = side * (world.obstacle_radius + world.corridor_clearance);
  const Vec2& c = world.obstacle_center;
  return {c + Vec2(-world.corridor_half_length, lateral),
          c + Vec2(world.corridor_half_length, lateral)};
}

WorldState SampleInitialState(const WorldConfig& world, SpatialMode mode,
                              Rng& rng) {
  WorldState s;
  s.agent = Vec2(rng.Uniform(world.start_region.lo.x(), world.start_region.hi.x()),
                 rng.Uniform(world.start_region.lo.y(), world.start_region.hi.y()));
  const Vec2 obj = ObjectNominal(world, mode);
  const double p = world.object_perturbation;
  s.object = obj + Vec2(rng.Uniform(-p, p), rng.Uniform(-p, p));
  s.goal = world.goal();
  s.carrying = false;
  return s;
}

WorldState Step(const WorldConfig& world, const WorldState& state,
                const Vector& action) {
  WorldState next = state;
  const bool grip = action[kGripDim] > 0.5;
  if (grip && !next.carrying &&
      (next.agent - next.object).norm() <= world.goal_tolerance) {
    next.carrying = true;
  } else if (!grip && next.carrying) {
    next.carrying = false;
  }
  Vec2 d(action[0], action[1]);
  if (!d.allFinite()) d.setZero();
  const double limit = world.max_speed_factor * world.base_speed;
  if (d.norm() > limit) d *= limit / d.norm();
  next.agent += d;
  const Vec2 rel = next.agent - world.obstacle_center;
  const double dist = rel.norm();
  if (dist < world.obstacle_radius) {
    next.agent = dist > 0.0 ? Vec2(world.obstacle_center + rel * (world.obstacle_radius / dist))
                            : Vec2(world.obstacle_center + Vec2(0.0, world.obstacle_radius));
  }
  next.agent = next.agent.cwiseMax(Vec2::Zero()).cwiseMin(Vec2::Ones());
  if (next.carrying) next.object = next.agent;
  return next;
}

Demonstration GenerateDemo(const WorldConfig& world,
                           const ExpertProfile& profile,
                           std::uint64_t rng_stream) {
  world.Validate();
  profile.Validate();
  if (profile.speed_multiplier > world.max_speed_factor) {
    Fail(ErrorCode::kConfig, "speed_multiplier exceeds the actuator limit");
  }
  Rng rng(DeriveStream(world.seed, "generate", rng_stream));
  const WorldState init = SampleInitialState(world, profile.spatial_mode, rng);
  auto [w1, w2] = CorridorWaypoints(world, profile.spatial_mode);
  if (profile.waypoint_jitter_std > 0.0) {
    const double min_r = world.obstacle_radius + 0.5 * world.corridor_clearance;
    for (Vec2* w : {&w1, &w2}) {
      *w += profile.waypoint_jitter_std * Vec2(rng.Normal(), rng.Normal());
      const Vec2 rel = *w - world.obstacle_center;
      if (rel.norm() < min_r) *w = world.obstacle_center + rel.normalized() * min_r;
    }
  }
  CheckCorridor(world, {init.object, w1, w2, world.goal()});

  std::vector<Leg> legs{{init.object, 0.0, kApproach}};
  for (const Leg& leg : CarryLegs(init.object, w1, w2, world.goal())) legs.push_back(leg);
  std::vector<Eigen::Vector3d> actions;
  AppendLegs(init.agent, legs, world.base_speed * profile.speed_multiplier,
             profile.pause, actions);
  // Release at the goal, then back away diagonally on the mode's side. The
  // retreat keeps full-speed rows after the release so chunks that start
  // near the goal exist and contain it.
  const double h = world.base_speed * profile.speed_multiplier;
  const double side = profile.spatial_mode == SpatialMode::kLeft ? 1.0 : -1.0;
  const Vec2 away = Vec2(-1.0, side).normalized() * h;
  for (int k = 0; k < world.retreat_steps; ++k) actions.emplace_back(away.x(), away.y(), 0.0);
  if (world.retreat_steps == 0) actions.emplace_back(0.0, 0.0, 0.0);

  const int n = static_cast<int>(actions.size());
  Demonstration demo;
  demo.episode_id = "stream-" + std::to_string(rng_stream);
  demo.task_id = world.task_id;
  demo.skills = profile.skills;
  demo.observations.resize(n, kObservationDim);
  demo.actions.resize(n, kActionDim);
  demo.eef_mask = {true, true, false};
  demo.mode_labels = ModeLabels{static_cast<int>(profile.spatial_mode),
                                profile.velocity_id};
  WorldState s = init;
  for (int i = 0; i < n; ++i) {
    demo.observations.row(i) = Observe(s).transpose();
    demo.actions.row(i) = actions[static_cast<std::size_t>(i)].transpose();
    s = Step(world, s, demo.actions.row(i).transpose());
    if ((s.agent - world.obstacle_center).norm() <= world.obstacle_radius) {
      Fail(ErrorCode::kInfeasibleWorld, "expert path entered the obstacle");
    }
  }
  return demo;
}

Matrix ScriptedExpertPolicy::PredictChunk(const Vector& observation) const {
  WorldState s;
  s.agent = observation.segment<2>(0);
  s.object = observation.segment<2>(2);
  s.goal = observation.segment<2>(4);
  s.carrying = observation[6] > 0.5;
  const auto [w1, w2] = CorridorWaypoints(world_, profile_.spatial_mode);
  const double step = world_.base_speed * profile_.speed_multiplier;

  std::vector<Eigen::Vector3d> actions;
  if (s.carrying) {
    AppendLegs(s.agent, CarryLegs(s.agent, w1, w2, s.goal), step, std::nullopt, actions);
  } else if ((s.object - s.goal).norm() > world_.goal_tolerance) {
    std::vector<Leg> legs{{s.object, 0.0, kApproach}};
    for (const Leg& leg : CarryLegs(s.object, w1, w2, s.goal)) legs.push_back(leg);
    AppendLegs(s.agent, legs, step, std::nullopt, actions);
  }
  Matrix chunk = Matrix::Zero(chunk_size_, kActionDim);
  const int rows = std::min<int>(chunk_size_, static_cast<int>(actions.size()));
  for (int i = 0; i < rows; ++i) {
    chunk.row(i) = actions[static_cast<std::size_t>(i)].transpose();
  }
  return chunk;
}

RolloutScore MakeScore(std::vector<double> step_scores) {
  RolloutScore score;
  score.step_scores = std::move(step_scores);
  if (!score.step_scores.empty()) {
    score.trial_score =
        std::accumulate(score.step_scores.begin(), score.step_scores.end(), 0.0) /
        static_cast<double>(score.step_scores.size());
  }
  return score;
}

Rollout RolloutPolicy(const WorldConfig& world, const ChunkPolicy& policy,
                      const WorldState& initial_state, int max_steps,
                      int horizon) {
  if (horizon < 1) Fail(ErrorCode::kConfig, "execution horizon must be >= 1");
  const double tol = world.goal_tolerance;
  Rollout out;
  WorldState state = initial_state;
  out.states.push_back(state);

  bool in_object = (state.agent - state.object).norm() <= tol;
  bool in_goal = (state.object - state.goal).norm() <= tol;
  int object_entries = in_object ? 1 : 0;
  int goal_entries = in_goal ? 1 : 0;
  bool grasped = state.carrying;
  double grasp_score = grasped ? 1.0 : 0.0;
  double deliver_score = 0.0;
  bool done = false;

  int steps = 0;
  while (steps < max_steps && !done) {
    const Matrix chunk = policy.PredictChunk(Observe(state));
    const int rows = std::max(1, std::min<int>(horizon, static_cast<int>(chunk.rows())));
    for (int r = 0; r < rows && steps < max_steps; ++r) {
      const Vector action = r < chunk.rows() ? Vector(chunk.row(r).transpose())
                                             : Vector(Vector::Zero(kActionDim));
      const WorldState prev = state;
      state = Step(world, state, action);
      out.states.push_back(state);
      ++steps;

      if (!grasped && state.carrying) {
        grasped = true;
        grasp_score = object_entries <= 1 ? 1.0 : 0.5;
      }
      const bool now_in_object =
          !state.carrying && (state.agent - state.object).norm() <= tol;
      if (!grasped && now_in_object && !in_object) ++object_entries;
      in_object = now_in_object;

      const bool now_in_goal = (state.object - state.goal).norm() <= tol;
      if (now_in_goal && !in_goal) ++goal_entries;
      in_goal = now_in_goal;

      if (grasped && prev.carrying && !state.carrying && now_in_goal) {
        deliver_score = goal_entries <= 1 ? 1.0 : 0.5;
        done = true;
        break;
      }
    }
  }
  out.step_budget_exceeded = !done;
  out.score = MakeScore({grasp_score, deliver_score});
  return out;
}

std::vector<int> StratifiedCounts(const std::vector<WeightedProfile>& mix,
                                  int n_demos) {
  if (mix.empty()) Fail(ErrorCode::kInvalidWeights, "profile mix is empty");
  double total = 0.0;
  for (const WeightedProfile& wp : mix) {
    if (!(wp.weight >= 0.0) || !std::isfinite(wp.weight)) {
      Fail(ErrorCode::kInvalidWeights, "weights must be finite and >= 0");
    }
    total += wp.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    Fail(ErrorCode::kInvalidWeights,
         "weights sum to " + std::to_string(total) + ", expected 1");
  }
  std::vector<int> counts(mix.size());
  std::vector<double> remainders(mix.size());
  int assigned = 0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const double exact = mix[i].weight * n_demos;
    counts[i] = static_cast<int>(std::floor(exact + 1e-9));
    remainders[i] = exact - counts[i];
    assigned += counts[i];
  }
  std::vector<std::size_t> order(mix.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < n_demos; k = (k + 1) % order.size()) {
    ++counts[order[k]];
    ++assigned;
  }
  return counts;
}

Dataset BuildBenchmarkDataset(const WorldConfig& world,
                              const std::vector<WeightedProfile>& mix,
                              int n_demos, std::uint64_t seed, int chunk_size) {
  if (n_demos < 1) Fail(ErrorCode::kConfig, "n_demos must be >= 1");
  const std::vector<int> counts = StratifiedCounts(mix, n_demos);
  std::vector<std::size_t> assignment;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    assignment.insert(assignment.end(), static_cast<std::size_t>(counts[i]), i);
  }
  Rng rng(DeriveStream(seed, "assign"));
  rng.Shuffle(assignment.begin(), assignment.end());

  Dataset ds;
  ds.chunk_size = chunk_size;
  ds.demos.reserve(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    Demonstration d = GenerateDemo(world, mix[assignment[i]].profile,
                                   DeriveStream(seed, "demo", i));
    char id[32];
    std::snprintf(id, sizeof(id), "demo-%05zu", i);
    d.episode_id = id;
    ds.demos.push_back(std::move(d));
  }
  return ds;
}

std::vector<WeightedProfile> PresetMix(const std::string& name) {
  auto profile = [](SpatialMode mode, double speed, int vid) {
    ExpertProfile p;
    p.spatial_mode = mode;
    p.speed_multiplier = speed;
    p.velocity_id = vid;
    return p;
  };
  using enum SpatialMode;
  if (name == "two-speed") {
    return {{profile(kLeft, 1.0, 0), 0.25}, {profile(kLeft, 2.0, 1), 0.25},
            {profile(kRight, 1.0, 0), 0.25}, {profile(kRight, 2.0, 1), 0.25}};
  }
  if (name == "single-speed") {
    return {{profile(kLeft, 1.0, 0), 0.5}, {profile(kRight, 1.0, 0), 0.5}};
  }
  if (name == "two-speed-left") {
    return {{profile(kLeft, 1.0, 0), 0.5}, {profile(kLeft, 2.0, 1), 0.5}};
  }
  if (name == "single-speed-left") {
    return {{profile(kLeft, 1.0, 0), 1.0}};
  }
  Fail(ErrorCode::kConfig, "unknown profile mix preset '" + name + "'");
}

json WorldToJson(const WorldConfig& w) {
  auto vec = [](const Vec2& v) { return json::array({v.x(), v.y()}); };
  auto box = [&](const Box& b) { return json{{"lo", vec(b.lo)}, {"hi", vec(b.hi)}}; };
  return json{{"obstacle_center", vec(w.obstacle_center)},
              {"obstacle_radius", w.obstacle_radius},
              {"start_region", box(w.start_region)},
              {"goal_region", box(w.goal_region)},
              {"object_center", vec(w.object_center)},
              {"object_mode_offset", w.object_mode_offset},
              {"object_perturbation", w.object_perturbation},
              {"goal_tolerance", w.goal_tolerance},
              {"corridor_half_length", w.corridor_half_length},
              {"corridor_clearance", w.corridor_clearance},
              {"base_speed", w.base_speed},
              {"max_speed_factor", w.max_speed_factor},
              {"control_rate", w.control_rate},
              {"retreat_steps", w.retreat_steps},
              {"task_id", w.task_id},
              {"seed", w.seed}};
}

WorldConfig WorldFromJson(const json& j) {
  WorldConfig w;
  try {
    auto vec = [](const json& v) { return Vec2(v.at(0).get<double>(), v.at(1).get<double>()); };
    auto box = [&](const json& b) { return Box{vec(b.at("lo")), vec(b.at("hi"))}; };
    if (j.contains("obstacle_center")) w.obstacle_center = vec(j["obstacle_center"]);
    if (j.contains("obstacle_radius")) w.obstacle_radius = j["obstacle_radius"].get<double>();
    if (j.contains("start_region")) w.start_region = box(j["start_region"]);
    if (j.contains("goal_region")) w.goal_region = box(j["goal_region"]);
    if (j.contains("object_center")) w.object_center = vec(j["object_center"]);
    if (j.contains("object_mode_offset")) w.object_mode_offset = j["object_mode_offset"].get<double>();
    if (j.contains("object_perturbation")) w.object_perturbation = j["object_perturbation"].get<double>();
    if (j.contains("goal_tolerance")) w.goal_tolerance = j["goal_tolerance"].get<double>();
    if (j.contains("corridor_half_length")) w.corridor_half_length = j["corridor_half_length"].get<double>();
    if (j.contains("corridor_clearance")) w.corridor_clearance = j["corridor_clearance"].get<double>();
    if (j.contains("base_speed")) w.base_speed = j["base_speed"].get<double>();
    if (j.contains("max_speed_factor")) w.max_speed_factor = j["max_speed_factor"].get<double>();
    if (j.contains("control_rate")) w.control_rate = j["control_rate"].get<double>();
    if (j.contains("retreat_steps")) w.retreat_steps = j["retreat_steps"].get<int>();
    if (j.contains("task_id")) w.task_id = j["task_id"].get<std::string>();
    if (j.contains("seed")) w.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad world config: ") + e.what());
  }
  return w;
}

json ProfileToJson(const ExpertProfile& p) {
  json j{{"spatial_mode", ModeName(p.spatial_mode)},
         {"speed_multiplier", p.speed_multiplier},
         {"waypoint_jitter_std", p.waypoint_jitter_std},
         {"velocity_id", p.velocity_id},
         {"skills", p.skills}};
  j["pause"] = p.pause ? json{{"segment", p.pause->segment}, {"steps", p.pause->steps}}
                       : json(nullptr);
  return j;
}

ExpertProfile ProfileFromJson(const json& j) {
  ExpertProfile p;
  try {
    if (j.contains("spatial_mode")) p.spatial_mode = ModeFromName(j["spatial_mode"].get<std::string>());
    if (j.contains("speed_multiplier")) p.speed_multiplier = j["speed_multiplier"].get<double>();
    if (j.contains("waypoint_jitter_std")) p.waypoint_jitter_std = j["waypoint_jitter_std"].get<double>();
    if (j.contains("velocity_id")) p.velocity_id = j["velocity_id"].get<int>();
    if (j.contains("skills")) p.skills = j["skills"].get<std::vector<std::string>>();
    if (j.contains("pause") && !j["pause"].is_null()) {
      p.pause = PauseSpec{j["pause"].at("segment").get<int>(), j["pause"].at("steps").get<int>()};
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad expert profile: ") + e.what());
  }
  p.Validate();
  return p;
}

json MixToJson(const std::vector<WeightedProfile>& mix) {
  json out = json::array();
  for (const WeightedProfile& wp : mix) {
    out.push_back(json{{"profile", ProfileToJson(wp.profile)}, {"weight", wp.weight}});
  }
  return out;
}

std::vector<WeightedProfile> MixFromJson(const json& j) {
  if (j.is_string()) return PresetMix(j.get<std::string>());
  if (!j.is_array()) Fail(ErrorCode::kConfig, "profile mix must be a preset name or array");
  std::vector<WeightedProfile> mix;
  for (const json& e : j) {
    try {
      mix.push_back({ProfileFromJson(e.at("profile")), e.at("weight").get<double>()});
    } catch (const json::exception& ex) {
      Fail(ErrorCode::kConfig, std::string("bad mix entry: ") + ex.what());
    }
  }
  return mix;
}

}  // namespace demodebias
