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

// Dataset sampling strategies and atomic-skill histograms.

#ifndef DEMODEBIAS_CURATION_HPP_
#define DEMODEBIAS_CURATION_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "trajectory.hpp"

namespace demodebias {

struct SamplingSpec {
  enum class Strategy { kTaskBased, kEpisodeBased };

  Strategy strategy = Strategy::kEpisodeBased;
  double fraction = 0.1;
  std::set<std::string> relevance_skills;  // task-based only
  std::uint64_t seed = 0;

  void Validate() const;
};

// Task-based keeps the ceil(fraction * #tasks) most relevant tasks whole,
// relevance = share of a task's episodes tagged with a relevance skill (ties
// by task_id). Episode-based keeps ceil(fraction * n_i) random episodes of
// every task. Both sort by episode_id first, so the result does not depend
// on input order.
Dataset SampleDataset(const Dataset& dataset, const SamplingSpec& spec);

// Relevance score per task, as used by task-based sampling.
std::map<std::string, double> TaskRelevance(
    const Dataset& dataset, const std::set<std::string>& relevance_skills);

struct SkillHistogram {
  std::map<std::string, double> percent;  // share of episodes per skill
  double relevant_coverage = 0.0;
  int episodes = 0;
};

SkillHistogram ComputeSkillHistogram(const Dataset& dataset,
                                     const std::set<std::string>& relevance_skills);

std::string SkillHistogramCsv(const SkillHistogram& h);
std::string SkillHistogramSvg(const SkillHistogram& h, const std::string& title);

SamplingSpec SamplingSpecFromJson(const nlohmann::json& j);
nlohmann::json SamplingSpecToJson(const SamplingSpec& s);

}  // namespace demodebias

#endif  // DEMODEBIAS_CURATION_HPP_
