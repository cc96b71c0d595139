// Copyright 2026 The Authors.
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

// Greedy label-set selection: each step picks the candidate maximizing
//   d + delta * reward - (1 - delta) * penalty
// where reward is the type coverage after adding the label and penalty its
// mean overlap with the labels already chosen.

#ifndef KGPROF_RERANK_H_
#define KGPROF_RERANK_H_

#include <cstddef>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "kgprof/distinct.h"
#include "kgprof/graph.h"

namespace kgprof {

using Bitset = boost::dynamic_bitset<>;

Bitset to_bitset(std::span<const std::uint32_t> positions, std::size_t population);

// |covered | positives| / population. With `marginal`, only the increase
// over |covered| counts.
double reward(const Bitset& positives, const Bitset& covered, std::size_t population,
              bool marginal = false);

// sum_j |positives & selected_j| / (|selected| * population); 0 for an
// empty selection.
double penalty(const Bitset& positives, std::span<const Bitset> selected, std::size_t population);

struct SelectionStep {
  std::size_t rank = 0;       // 1-based
  std::size_t candidate = 0;  // index into the candidate list
  double d = 0.0;
  double reward = 0.0;
  double penalty = 0.0;
  double objective = 0.0;
  std::size_t covered_count = 0;
};

struct LabelSet {
  TypeId type;
  std::size_t population = 0;
  std::vector<ScoredLabel> labels;  // selection order
  Bitset covered;
  std::vector<SelectionStep> trace;
};

struct SelectOptions {
  bool marginal_reward = false;
};

// Candidates must share one type of `population` entities. Stops after k
// picks or when candidates run out. Objective ties go to the higher d, then
// the higher support, then the smaller key. Throws kEmptyCandidates and
// kInvalidArgument (k < 1, delta outside [0, 1]).
LabelSet select_labels(std::span<const ScoredLabel> candidates, std::size_t population,
                       std::size_t k, double delta, const SelectOptions& options = {});

// Groups scored labels by type and selects each type independently; types
// without candidates are omitted. Ordered by type id.
std::vector<LabelSet> select_per_type(std::span<const ScoredLabel> scored, const KnowledgeGraph& g,
                                      std::size_t k, double delta,
                                      const SelectOptions& options = {}, std::size_t threads = 1);

}  // namespace kgprof

#endif  // KGPROF_RERANK_H_
