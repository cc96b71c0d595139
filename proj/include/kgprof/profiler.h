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

// Entity profiles: the selected labels an entity matches, each annotated
// with how it sets the entity apart from the other entities of its type.

#ifndef KGPROF_PROFILER_H_
#define KGPROF_PROFILER_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kgprof/graph.h"
#include "kgprof/labels.h"
#include "kgprof/rerank.h"

namespace kgprof {

enum class IndicatorOp : std::uint8_t { kNeq, kGt, kLt };

struct Indicator {
  IndicatorOp op = IndicatorOp::kNeq;
  int pct = 0;
  bool operator==(const Indicator&) const = default;
};

// round(100 * num / den), halves away from zero.
int percent(std::size_t num, std::size_t den);

// Neq: share of the other members of the type that do not match.
// AIL: the entity's largest in-interval value v is compared with the median
// of the members' largest values; above it gives Gt with the share of other
// members whose largest value is strictly below v, otherwise Lt with the
// share strictly above. Members without the attribute count on neither side.
// Throws kSingletonType when the type has one member, kUntypedEntity for an
// untyped entity and kInvalidArgument when `e` does not match `l`.
Indicator indicator(const Label& l, EntityId e, const KnowledgeGraph& g);

struct ProfileEntry {
  Label label;
  std::string key;
  std::size_t rank = 0;  // rank inside the label set of the label's type
  Indicator indicator;
};

struct Profile {
  EntityId entity;
  std::vector<ProfileEntry> entries;
  // Set when no label matched.
  std::string diagnostic;

  bool empty() const { return entries.empty(); }
};

inline constexpr const char* kSparseProfile = "sparse profile";

// Caches per-label indicator statistics so whole types can be profiled
// cheaply. Safe for concurrent profile() calls.
class Profiler {
 public:
  Profiler(std::span<const LabelSet> sets, const KnowledgeGraph& g);

  // The first m labels, by rank, that `e` matches. Labels from all of e's
  // types are interleaved by rank, ties going to the smaller type id.
  // Throws kUntypedEntity and kInvalidArgument (m < 1).
  Profile profile(EntityId e, std::size_t m) const;

 private:
  struct LabelStats {
    const ScoredLabel* label;
    std::size_t rank;
    std::size_t population;
    std::size_t positives;
    // AIL only: members' largest values, sorted, and their median.
    std::vector<double> maxima;
    double median = 0.0;
    Bitset positive_bits;
  };

  Indicator indicator_for(const LabelStats& s, EntityId e) const;

  const KnowledgeGraph* g_;
  std::vector<std::vector<LabelStats>> by_type_;  // indexed by type id
};

Profile profile_entity(EntityId e, std::span<const LabelSet> sets, const KnowledgeGraph& g,
                       std::size_t m);

// Profiles of every typed entity, in id order, including empty ones.
std::vector<Profile> profile_all(std::span<const LabelSet> sets, const KnowledgeGraph& g,
                                 std::size_t m, std::size_t threads = 1);

enum class RenderFormat { kJson, kMarkdown, kText };

// JSON: array of {entity, entries: [{label, indicator: {op, pct}}]}, with a
// "diagnostic" member on empty profiles. Markdown and Text show each entry as
// "property: value (op pct%)" using local names.
void render(std::span<const Profile> profiles, const KnowledgeGraph& g, RenderFormat format,
            std::ostream& out);

// Text of one entry, e.g. "genre: Comedy (≠ 89%)".
std::string entry_text(const ProfileEntry& entry, const KnowledgeGraph& g);

// Part of an IRI after the last '/' or '#'.
std::string local_name(std::string_view iri);

}  // namespace kgprof

#endif  // KGPROF_PROFILER_H_
