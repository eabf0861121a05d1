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

#include "curation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "error.hpp"
#include "rng.hpp"
#include "svg.hpp"

namespace demodebias {
namespace {

using nlohmann::json;

std::vector<const Demonstration*> SortedById(const Dataset& dataset) {
  std::vector<const Demonstration*> demos;
  demos.reserve(dataset.demos.size());
  for (const Demonstration& d : dataset.demos) demos.push_back(&d);
  std::stable_sort(demos.begin(), demos.end(), [](const auto* a, const auto* b) {
    return a->episode_id < b->episode_id;
  });
  return demos;
}

std::map<std::string, std::vector<const Demonstration*>> ByTask(const Dataset& dataset) {
  std::map<std::string, std::vector<const Demonstration*>> tasks;
  for (const Demonstration* d : SortedById(dataset)) tasks[d->task_id].push_back(d);
  return tasks;
}

bool HasRelevantSkill(const Demonstration& d, const std::set<std::string>& skills) {
  return std::any_of(d.skills.begin(), d.skills.end(),
                     [&](const std::string& s) { return skills.count(s) > 0; });
}

int CeilCount(double fraction, std::size_t n) {
  return static_cast<int>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

}  // namespace

void SamplingSpec::Validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    Fail(ErrorCode::kConfig, "sampling fraction must lie in (0, 1]");
  }
  if (strategy == Strategy::kTaskBased && relevance_skills.empty()) {
    Fail(ErrorCode::kConfig, "task-based sampling needs relevance skills");
  }
}

std::map<std::string, double> TaskRelevance(
    const Dataset& dataset, const std::set<std::string>& relevance_skills) {
  std::map<std::string, double> score;
  for (const auto& [task, demos] : ByTask(dataset)) {
    const auto hits = std::count_if(demos.begin(), demos.end(), [&](const auto* d) {
      return HasRelevantSkill(*d, relevance_skills);
    });
    score[task] = static_cast<double>(hits) / static_cast<double>(demos.size());
  }
  return score;
}

Dataset SampleDataset(const Dataset& dataset, const SamplingSpec& spec) {
  spec.Validate();
  if (dataset.demos.empty()) Fail(ErrorCode::kEmptyDataset, "dataset is empty");
  const auto tasks = ByTask(dataset);
  std::vector<const Demonstration*> kept;

  if (spec.strategy == SamplingSpec::Strategy::kTaskBased) {
    const auto relevance = TaskRelevance(dataset, spec.relevance_skills);
    std::vector<std::pair<std::string, double>> ranked(relevance.begin(), relevance.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (ranked.front().second <= 0.0) {
      Fail(ErrorCode::kEmptySelection, "no task contains a relevance skill");
    }
    const int k = std::min<int>(CeilCount(spec.fraction, ranked.size()),
                                static_cast<int>(ranked.size()));
    for (int i = 0; i < k; ++i) {
      const auto& demos = tasks.at(ranked[static_cast<std::size_t>(i)].first);
      kept.insert(kept.end(), demos.begin(), demos.end());
    }
  } else {
    for (const auto& [task, demos] : tasks) {
      std::vector<const Demonstration*> pool = demos;
      Rng rng(DeriveStream(spec.seed, "episode-sample:" + task));
      rng.Shuffle(pool.begin(), pool.end());
      const int k = std::min<int>(CeilCount(spec.fraction, pool.size()),
                                  static_cast<int>(pool.size()));
      kept.insert(kept.end(), pool.begin(), pool.begin() + k);
    }
  }
  if (kept.empty()) Fail(ErrorCode::kEmptySelection, "sampling selected nothing");
  std::sort(kept.begin(), kept.end(), [](const auto* a, const auto* b) {
    return a->episode_id < b->episode_id;
  });
  Dataset out;
  out.chunk_size = dataset.chunk_size;
  out.demos.reserve(kept.size());
  for (const Demonstration* d : kept) out.demos.push_back(*d);
  return out;
}

SkillHistogram ComputeSkillHistogram(const Dataset& dataset,
                                     const std::set<std::string>& relevance_skills) {
  if (dataset.demos.empty()) Fail(ErrorCode::kEmptyDataset, "dataset is empty");
  SkillHistogram h;
  h.episodes = static_cast<int>(dataset.demos.size());
  std::map<std::string, int> counts;
  int relevant = 0;
  bool any_tag = false;
  for (const Demonstration& d : dataset.demos) {
    std::set<std::string> unique(d.skills.begin(), d.skills.end());
    any_tag = any_tag || !unique.empty();
    for (const std::string& s : unique) ++counts[s];
    if (HasRelevantSkill(d, relevance_skills)) ++relevant;
  }
  if (!any_tag) Fail(ErrorCode::kNoSkillTags, "no demonstration carries skill tags");
  for (const auto& [skill, c] : counts) h.percent[skill] = 100.0 * c / h.episodes;
  h.relevant_coverage = 100.0 * relevant / h.episodes;
  return h;
}

std::string SkillHistogramCsv(const SkillHistogram& h) {
  std::ostringstream o;
  o.precision(17);
  o << "skill,percent\n";
  for (const auto& [skill, pct] : h.percent) o << skill << ',' << pct << '\n';
  return o.str();
}

std::string SkillHistogramSvg(const SkillHistogram& h, const std::string& title) {
  std::vector<std::pair<std::string, double>> bars(h.percent.begin(), h.percent.end());
  return svg::BarChart(title, bars, "% of episodes");
}

SamplingSpec SamplingSpecFromJson(const json& j) {
  SamplingSpec s;
  try {
    const std::string strategy = j.value("strategy", std::string("episode"));
    if (strategy == "task") s.strategy = SamplingSpec::Strategy::kTaskBased;
    else if (strategy == "episode") s.strategy = SamplingSpec::Strategy::kEpisodeBased;
    else Fail(ErrorCode::kConfig, "strategy must be 'task' or 'episode'");
    if (j.contains("fraction")) s.fraction = j["fraction"].get<double>();
    if (j.contains("relevance_skills")) {
      for (const json& k : j["relevance_skills"]) s.relevance_skills.insert(k.get<std::string>());
    }
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, std::string("bad sampling spec: ") + e.what());
  }
  s.Validate();
  return s;
}

json SamplingSpecToJson(const SamplingSpec& s) {
  return json{{"strategy", s.strategy == SamplingSpec::Strategy::kTaskBased ? "task" : "episode"},
              {"fraction", s.fraction},
              {"relevance_skills", s.relevance_skills},
              {"seed", s.seed}};
}

}  // namespace demodebias
