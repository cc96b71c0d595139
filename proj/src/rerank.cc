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

#include "kgprof/rerank.h"

#include <map>

#include <fmt/format.h>

namespace kgprof {

Bitset to_bitset(std::span<const std::uint32_t> positions, std::size_t population) {
  Bitset b(population);
  for (std::uint32_t p : positions) {
    if (p >= population) throw Error(ErrorCode::kInvalidArgument, "position outside the type");
    b.set(p);
  }
  return b;
}

double reward(const Bitset& positives, const Bitset& covered, std::size_t population,
              bool marginal) {
  const std::size_t after = (covered | positives).count();
  const std::size_t gained = marginal ? after - covered.count() : after;
  return static_cast<double>(gained) / static_cast<double>(population);
}

double penalty(const Bitset& positives, std::span<const Bitset> selected, std::size_t population) {
  if (selected.empty()) return 0.0;
  std::size_t overlap = 0;
  for (const Bitset& s : selected) overlap += (positives & s).count();
  return static_cast<double>(overlap) /
         (static_cast<double>(selected.size()) * static_cast<double>(population));
}

namespace {

bool better(double obj_a, const ScoredLabel& a, double obj_b, const ScoredLabel& b) {
  if (obj_a != obj_b) return obj_a > obj_b;
  return scored_before(a, b);
}

}  // namespace

LabelSet select_labels(std::span<const ScoredLabel> candidates, std::size_t population,
                       std::size_t k, double delta, const SelectOptions& options) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyCandidates, "no candidate labels to select");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("delta must lie in [0, 1], got {}", delta));
  }
  if (population == 0) throw Error(ErrorCode::kInvalidArgument, "type population is zero");

  const std::size_t n = candidates.size();
  std::vector<Bitset> bits;
  bits.reserve(n);
  for (const ScoredLabel& c : candidates) bits.push_back(to_bitset(c.candidate.positives, population));

  LabelSet set;
  set.type = candidates.front().candidate.label.type;
  set.population = population;
  set.covered = Bitset(population);
  std::vector<bool> taken(n, false);
  // Running sum of overlaps with the selected labels, per candidate.
  std::vector<std::size_t> overlap(n, 0);
  const double pop = static_cast<double>(population);

  for (std::size_t rank = 1; rank <= k && rank <= n; ++rank) {
    const std::size_t chosen_count = set.labels.size();
    std::size_t best = n;
    double best_obj = 0.0, best_reward = 0.0, best_penalty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double r = reward(bits[i], set.covered, population, options.marginal_reward);
      const double p = chosen_count == 0
                           ? 0.0
                           : static_cast<double>(overlap[i]) /
                                 (static_cast<double>(chosen_count) * pop);
      const double obj = candidates[i].d + delta * r - (1.0 - delta) * p;
      if (best == n || better(obj, candidates[i], best_obj, candidates[best])) {
        best = i;
        best_obj = obj;
        best_reward = r;
        best_penalty = p;
      }
    }
    taken[best] = true;
    set.covered |= bits[best];
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) overlap[i] += (bits[i] & bits[best]).count();
    }
    set.labels.push_back(candidates[best]);
    set.trace.push_back(SelectionStep{rank, best, candidates[best].d, best_reward, best_penalty,
                                      best_obj, set.covered.count()});
  }
  return set;
}

std::vector<LabelSet> select_per_type(std::span<const ScoredLabel> scored, const KnowledgeGraph& g,
                                      std::size_t k, double delta, const SelectOptions& options,
                                      std::size_t threads) {
  std::map<TypeId, std::vector<ScoredLabel>> by_type;
  for (const ScoredLabel& s : scored) by_type[s.candidate.label.type].push_back(s);
  std::vector<const std::vector<ScoredLabel>*> groups;
  for (const auto& [t, v] : by_type) groups.push_back(&v);
  std::vector<LabelSet> out(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t i) {
    const auto& v = *groups[i];
    const TypeId t = v.front().candidate.label.type;
    out[i] = select_labels(v, g.entities_of_type(t).size(), k, delta, options);
  });
  return out;
}

}  // namespace kgprof
