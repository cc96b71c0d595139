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

// Walk generation for the three path strategies:
//   H  homophily: uniform random walks over relation edges (both directions)
//   A  attributive: hops between same-type entities close in attribute space
//   S  structural: hops between same-type entities with similar neighbor-type
//      counts
// and the proportional mixing of the three pools into one corpus.

#ifndef KGPROF_WALKS_H_
#define KGPROF_WALKS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kgprof/common.h"
#include "kgprof/graph.h"
#include "kgprof/spaces.h"

namespace kgprof {

// steps[0] is the anchor.
using Walk = std::vector<EntityId>;
using WalkCorpus = std::vector<Walk>;

// n walks of at most `len` entities from `anchor`, each step moving along a
// uniformly chosen incident relation edge. Walks stop early at isolated nodes.
std::vector<Walk> h_walks(const KnowledgeGraph& g, EntityId anchor, std::size_t n, std::size_t len,
                          Rng& rng);

// Precomputes every row's L-infinity ball at radius r and walks over them.
// Balls larger than `ball_cap` keep a uniform sample of ball_cap members.
class HypercubeWalker {
 public:
  HypercubeWalker(const PointSpace& space, double r, std::size_t ball_cap = 4096,
                  std::size_t threads = 1);

  const PointSpace& space() const { return *space_; }
  double radius() const { return r_; }
  std::span<const std::uint32_t> ball(std::size_t row) const;

  // Each step jumps to a uniform member of the current ball; an empty ball
  // ends the walk.
  std::vector<Walk> walks(std::size_t anchor_row, std::size_t n, std::size_t len, Rng& rng) const;

 private:
  const PointSpace* space_;
  double r_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> members_;
};

std::vector<Walk> hypercube_walks(const PointSpace& space, std::size_t anchor_row, std::size_t n,
                                  std::size_t len, double r, Rng& rng);

struct MixResult {
  WalkCorpus corpus;
  std::array<std::size_t, 3> taken{};  // from H, A, S
};

// Draws from each pool, without replacement, a share of corpus_size
// proportional to its lambda (largest-remainder rounding). A pool smaller
// than its share is taken whole and the shortfall is spread over the other
// positive-lambda pools. Chosen walks keep their pool order, pools are
// concatenated H, A, S. Throws kEmptyPool when a positive-lambda pool is
// empty, kInvalidArgument when all lambdas are zero or any is negative.
MixResult mix_paths(std::span<const Walk> h, std::span<const Walk> a, std::span<const Walk> s,
                    std::array<double, 3> lambda, std::size_t corpus_size, Rng& rng);

// Quotas alone, for inspection and testing.
std::array<std::size_t, 3> mix_quotas(std::array<double, 3> lambda,
                                      std::array<std::size_t, 3> pool_sizes,
                                      std::size_t corpus_size);

struct WalkConfig {
  double lambda_h = 1.0, lambda_a = 1.0, lambda_s = 1.0;
  std::size_t walks_per_entity = 100;
  std::size_t walk_len = 8;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t ball_cap = 4096;
  // Ball population target; <= 0 means the graph's average degree.
  double radius_target = 0.0;
  // Drop the weight of a strategy whose pool comes out empty instead of
  // failing.
  bool rescale_empty = true;
};

struct StrategyReport {
  TypeId type;
  bool attributive = false;
  RadiusResult radius;
};

struct CorpusReport {
  std::array<std::size_t, 3> pool_sizes{};
  std::array<std::size_t, 3> taken{};
  std::array<double, 3> lambda{};
  std::vector<StrategyReport> spaces;
};

// Anchors are all typed entities. Each anchor contributes
// ceil(walks_per_entity * lambda_i / sum) walks to pool i before mixing; the
// mixed corpus has walks_per_entity * |anchors| walks. Spaces whose rows are
// all identical get no walker.
WalkCorpus generate_corpus(const KnowledgeGraph& g, const WalkConfig& config,
                           CorpusReport* report = nullptr);

// One walk per line, entity names separated by single spaces.
void write_corpus(const WalkCorpus& corpus, const KnowledgeGraph& g, std::ostream& out);
WalkCorpus read_corpus(std::istream& in, const KnowledgeGraph& g);

}  // namespace kgprof

#endif  // KGPROF_WALKS_H_
