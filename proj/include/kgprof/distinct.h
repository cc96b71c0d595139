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

// Distinctiveness of a label: mean similarity among its positive entities
// minus mean similarity between positives and the negatives of the same type.

#ifndef KGPROF_DISTINCT_H_
#define KGPROF_DISTINCT_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kgprof/common.h"
#include "kgprof/graph.h"
#include "kgprof/labels.h"
#include "kgprof/skipgram.h"

namespace kgprof {

enum class Estimator : std::uint8_t { kExact, kSampled };

struct ScoredLabel {
  Candidate candidate;
  double d = 0.0;  // internal_sim - external_sim
  double internal_sim = 0.0;
  double external_sim = 0.0;
  Estimator estimator = Estimator::kExact;
  std::size_t pair_budget = 0;  // kSampled only
};

struct ScoreOptions {
  // Average the internal similarity over ordered pairs i != j instead of all
  // |P|^2 pairs. A single positive then has internal similarity 0.
  bool exclude_diagonal = false;
  Estimator estimator = Estimator::kExact;
  std::size_t pair_budget = 100000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

// Full pair average, computed from sums of unit vectors. Negatives are the
// other members of the label's type. Throws kEmptyPositives, kEmptyNegatives
// and kMissingEmbedding.
ScoredLabel distinctiveness_exact(const Candidate& c, const Embedding& emb, const KnowledgeGraph& g,
                                  bool exclude_diagonal = false);

// Estimates each average from pair_budget uniformly drawn pairs (with
// replacement). Returns the exact result when both |P|*|N| and |P|^2 fit in
// the budget. Requires pair_budget >= 1000.
ScoredLabel distinctiveness_sampled(const Candidate& c, const Embedding& emb,
                                    const KnowledgeGraph& g, std::size_t pair_budget, Rng& rng,
                                    bool exclude_diagonal = false);

struct ScoreStats {
  std::size_t scored = 0;
  // Labels dropped because no positive or no negative carries an embedding.
  std::size_t skipped = 0;
  // Typed entities without an embedding, excluded from every set.
  std::size_t unembedded = 0;
};

// Scores every candidate, skipping entities without embeddings. Sorted by
// d desc, support desc, key asc. Each label draws from its own seeded stream.
std::vector<ScoredLabel> score_pool(const CandidatePool& pool, const Embedding& emb,
                                    const KnowledgeGraph& g, const ScoreOptions& options = {},
                                    ScoreStats* stats = nullptr);

// The score_pool order.
bool scored_before(const ScoredLabel& a, const ScoredLabel& b);

}  // namespace kgprof

#endif  // KGPROF_DISTINCT_H_
