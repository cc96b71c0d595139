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

// Skip-gram with negative sampling over walk corpora, and the entity
// embeddings it produces.

#ifndef KGPROF_SKIPGRAM_H_
#define KGPROF_SKIPGRAM_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "kgprof/common.h"
#include "kgprof/graph.h"
#include "kgprof/walks.h"

namespace kgprof {

class Embedding {
 public:
  Embedding() = default;
  Embedding(std::vector<EntityId> entities, std::size_t dim);

  std::size_t size() const { return entities_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const EntityId> entities() const { return entities_; }

  bool contains(EntityId e) const { return index_.count(e) > 0; }
  std::optional<std::size_t> row_of(EntityId e) const;

  std::span<double> input(std::size_t row) { return {input_.data() + row * dim_, dim_}; }
  std::span<const double> input(std::size_t row) const { return {input_.data() + row * dim_, dim_}; }
  std::span<double> context(std::size_t row) { return {context_.data() + row * dim_, dim_}; }
  std::span<const double> context(std::size_t row) const {
    return {context_.data() + row * dim_, dim_};
  }
  // Input vector of `e`; throws kMissingEmbedding.
  std::span<const double> vector(EntityId e) const;

 private:
  std::vector<EntityId> entities_;
  std::unordered_map<EntityId, std::uint32_t> index_;
  std::size_t dim_ = 0;
  std::vector<double> input_;
  std::vector<double> context_;
};

struct SkipGramConfig {
  std::size_t dim = 200;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;
  // 1 is the deterministic mode; more threads update shared vectors without
  // locking and are reproducible only statistically.
  std::size_t threads = 1;
};

// Called after each epoch (1-based) with the current embedding.
using EpochCallback = std::function<void(std::size_t epoch, const Embedding&)>;

// Vocabulary is every entity appearing in the corpus, ordered by id. Input
// vectors start uniform in [-0.5/dim, 0.5/dim], context vectors at zero.
// Negatives follow the corpus unigram distribution raised to 0.75; the
// learning rate decays linearly to initial_lr / 100.
Embedding train_skipgram(const WalkCorpus& corpus, const SkipGramConfig& config,
                         const EpochCallback& on_epoch = {});

// One SGNS target: an output vector and its label (1 for the observed
// context, 0 for a negative sample).
struct SgnsTarget {
  std::span<double> vec;
  double label;
};

// log sigma(v.u_pos) + sum log sigma(-v.u_neg)
double sgns_objective(std::span<const double> center, std::span<const SgnsTarget> targets);

// Gradient-ascent step of sgns_objective with rate lr. Every gradient is taken
// at the incoming values; `center` is updated after all targets.
void sgns_step(std::span<double> center, std::span<const SgnsTarget> targets, double lr);

double dot(std::span<const double> a, std::span<const double> b);

// Cosine of the two input vectors; 0 when either is the zero vector.
double similarity(const Embedding& emb, EntityId i, EntityId j);
double cosine(std::span<const double> a, std::span<const double> b);

// "N D" header, then one line per entity: name and D reals (6 significant
// digits). Only input vectors are stored.
void write_embedding(const Embedding& emb, const KnowledgeGraph& g, std::ostream& out);
Embedding read_embedding(std::istream& in, const KnowledgeGraph& g);

}  // namespace kgprof

#endif  // KGPROF_SKIPGRAM_H_
