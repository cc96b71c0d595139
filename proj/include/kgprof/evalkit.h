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

// Label-set evaluation against property-level ground truth: ranking
// metrics, baselines and agreement counts.

#ifndef KGPROF_EVALKIT_H_
#define KGPROF_EVALKIT_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgprof/common.h"
#include "kgprof/graph.h"
#include "kgprof/labels.h"
#include "kgprof/rerank.h"

namespace kgprof {

// Type name -> ordered property names, without duplicates.
struct GroundTruth {
  std::map<std::string, std::vector<std::string>> by_type;
};

// JSON object {"<type>": ["<property>", ...], ...}. Throws kFormat,
// including for a property listed twice under one type.
GroundTruth read_ground_truth(std::istream& in);

// Average precision over the truth items, truncated at k: every prediction
// at rank i <= k that hits a not-yet-hit truth item adds hits_so_far / i,
// and the sum is divided by |truth|. Throws kEmptyTruth, kInvalidArgument
// for k < 1.
double map_at_k(std::span<const std::string> predicted, std::span<const std::string> truth,
                std::size_t k);

// Harmonic mean of precision (distinct hits / k) and recall (distinct hits /
// |truth|); 0 when there is no hit.
double f_measure_at_k(std::span<const std::string> predicted, std::span<const std::string> truth,
                      std::size_t k);

// Distinct truth items found in the first k predictions.
std::size_t overlap_at_k(std::span<const std::string> predicted, std::span<const std::string> truth,
                         std::size_t k);

// Mean |A_k & B_k| over all unordered pairs of lists, each cut to k items.
// Throws kInvalidArgument with fewer than two lists.
double mean_pairwise_agreement(std::span<const std::vector<std::string>> lists, std::size_t k);

// k candidates drawn uniformly without replacement, in draw order. Throws
// kEmptyCandidates for an empty pool.
std::vector<Candidate> baseline_random(const TypePool& pool, std::size_t k, Rng& rng);

// tf = support inside the type; idf = log(|T| / types having a candidate with
// the same property and at least one positive). |T| is the graph's type
// count. Top k by tf * idf, ties by key.
std::vector<Candidate> baseline_tfidf(const CandidatePool& pool, TypeId t, const KnowledgeGraph& g,
                                      std::size_t k);

double tfidf_score(const Candidate& c, const CandidatePool& pool, const KnowledgeGraph& g);

// Property names of the labels, in order: the simplified label form.
std::vector<std::string> simplified(std::span<const Candidate> labels, const KnowledgeGraph& g);
std::vector<std::string> simplified(const LabelSet& set, const KnowledgeGraph& g);

struct MethodMetrics {
  std::string method;
  std::string type;
  std::size_t k = 0;
  double map = 0.0;
  double f = 0.0;
  std::size_t overlap = 0;
};

struct EvalReport {
  std::vector<MethodMetrics> rows;
  // Per method and k, the mean over evaluated types.
  std::vector<MethodMetrics> means;
};

// Scores the selected label sets and both baselines on every type present in
// the ground truth, for each k in `ks`. Types absent from `sets` count as an
// empty prediction.
EvalReport evaluate(std::span<const LabelSet> sets, const CandidatePool& pool,
                    const GroundTruth& truth, const KnowledgeGraph& g,
                    std::span<const std::size_t> ks, std::uint64_t seed);

void write_report_json(const EvalReport& report, std::ostream& out);
void write_report_text(const EvalReport& report, std::ostream& out);

}  // namespace kgprof

#endif  // KGPROF_EVALKIT_H_
