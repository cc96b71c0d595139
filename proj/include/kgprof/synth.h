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

// Seeded synthetic knowledge graphs for tests, demos and benchmarks.

#ifndef KGPROF_SYNTH_H_
#define KGPROF_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "kgprof/graph.h"

namespace kgprof {

inline constexpr std::string_view kSynthBase = "http://example.org/";

struct RandomGraphSpec {
  std::size_t entities = 60;
  std::size_t types = 3;
  std::size_t relation_properties = 3;
  std::size_t relation_edges = 180;
  std::size_t numeric_attributes = 2;
  std::size_t categorical_attributes = 2;
  std::size_t categories = 4;
  // Chance that an entity carries a given attribute.
  double attribute_coverage = 0.8;
  // Chance that an entity gets a second type.
  double second_type = 0.1;
  std::size_t untyped = 0;
};

// Every entity typed (apart from `untyped` extra ones), attributes drawn per
// entity, relation edges between uniform endpoints without self loops.
KnowledgeGraph random_graph(const RandomGraphSpec& spec, std::uint64_t seed);

// Two disjoint cliques of n entities each, all of one type, linked in both
// directions by one property. Entities a0..a{n-1} and b0..b{n-1}.
KnowledgeGraph two_cliques(std::size_t n = 10);

struct Communities {
  KnowledgeGraph graph;
  std::vector<EntityId> first;
  std::vector<EntityId> second;
};

// Two communities of per_side entities of one type. Each unordered pair is
// linked with probability p_in inside a community and p_out across.
Communities two_communities(std::size_t per_side, double p_in, double p_out, std::uint64_t seed);

// 200-entity movie graph (films, people, studios, countries, genres) with
// two latent film schools that shape years, runtimes, genres and crews.
KnowledgeGraph sample_graph(std::uint64_t seed = 7);

// Graph of `entities` entities over five types with exactly `edges` edges:
// one numeric and one categorical attribute per entity, the rest relation
// edges that stay inside blocks of 100 entities with probability 0.8.
KnowledgeGraph scale_graph(std::size_t entities, std::size_t edges, std::uint64_t seed);

}  // namespace kgprof

#endif  // KGPROF_SYNTH_H_
