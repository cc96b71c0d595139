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

// Candidate labels: the four label kinds, their matching semantics, the
// candidate pool and support filtering.

#ifndef KGPROF_LABELS_H_
#define KGPROF_LABELS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kgprof/common.h"
#include "kgprof/discretize.h"
#include "kgprof/graph.h"

namespace kgprof {

enum class LabelKind : std::uint8_t { kAIL, kAVL, kRAL, kREL };

std::string_view label_kind_name(LabelKind kind);

struct Label;

struct ValueTerm {
  std::string text;  // literal lexical form
  bool operator==(const ValueTerm&) const = default;
};

struct EntityTerm {
  EntityId entity;
  bool operator==(const EntityTerm&) const = default;
};

// RAL payload. The inner label is an AIL or AVL label on the target type.
struct NestedTerm {
  std::shared_ptr<const Label> inner;
  bool operator==(const NestedTerm& o) const;
};

// <type, property, value>. `inverse` marks relational labels read against
// the edge direction (incoming edges).
struct Label {
  TypeId type;
  PropertyId property;
  bool inverse = false;
  std::variant<Interval, ValueTerm, EntityTerm, NestedTerm> value;

  LabelKind kind() const;
  const Interval& interval() const { return std::get<Interval>(value); }
  const std::string& text() const { return std::get<ValueTerm>(value).text; }
  EntityId target() const { return std::get<EntityTerm>(value).entity; }
  const Label& inner() const { return *std::get<NestedTerm>(value).inner; }

  bool operator==(const Label&) const = default;

  static Label ail(TypeId t, PropertyId p, Interval iv);
  static Label avl(TypeId t, PropertyId p, std::string value);
  static Label rel(TypeId t, PropertyId p, EntityId target, bool inverse = false);
  static Label ral(TypeId t, PropertyId p, Label inner, bool inverse = false);
};

// Canonical text of a label, used for deduplication and as the last
// tie-breaker wherever labels are ordered.
std::string label_key(const Label& l, const KnowledgeGraph& g);

// Does `e` match `l`? Untyped entities and entities outside l.type never match.
bool matches(const Label& l, EntityId e, const KnowledgeGraph& g);

// Positions (into entities_of_type(l.type)) of the entities matching `l`,
// computed from the graph indexes.
std::vector<std::uint32_t> positive_positions(const Label& l, const KnowledgeGraph& g);

// |E_t^l| / |E_t|, by full scan. Throws kUnknownType when E_t is empty.
double support(const Label& l, const KnowledgeGraph& g);

// How an attribute's literal values are treated.
enum class AttributeClass { kCategorical, kNumeric, kYear };

// A property is a year attribute when >= 90% of its values are years, numeric
// when >= 90% are numbers or years, categorical otherwise.
AttributeClass classify_attribute(std::span<const LiteralValue> values);

struct Candidate {
  Label label;
  std::string key;
  std::vector<std::uint32_t> positives;  // sorted positions into E_t
  double support = 0.0;
};

struct TypePool {
  TypeId type;
  std::size_t population = 0;  // |E_t|
  std::vector<Candidate> candidates;
};

struct PoolCounts {
  std::size_t ail = 0, avl = 0, ral = 0, rel = 0;
};

struct CandidatePool {
  std::vector<TypePool> types;  // ordered by type id

  std::size_t size() const;
  PoolCounts counts() const;
  const TypePool* find(TypeId t) const;
};

struct EnumerateOptions {
  // Support bounds applied to the inner labels of RAL candidates.
  double alpha = 0.1;
  DiscretizePolicy density;
  // Attributes with more distinct values than this produce no AVL labels.
  std::size_t avl_value_cap = 10000;
  bool include_inverse = false;
  std::size_t threads = 1;
};

CandidatePool enumerate_candidates(const KnowledgeGraph& g, const EnumerateOptions& options = {});

// Keeps labels with alpha < support < 1 - alpha. Requires 0 < alpha < 0.5.
CandidatePool filter_candidates(const CandidatePool& pool, double alpha);

// Candidate for one label, positives and support recomputed from the graph.
// Throws kUnknownType when the label's type has no entities.
Candidate candidate_for(const Label& label, const KnowledgeGraph& g);

// Builds candidates for already-known labels (e.g. read back from disk),
// grouping by type and recomputing positives and support from the graph.
CandidatePool pool_from_labels(const std::vector<Label>& labels, const KnowledgeGraph& g);

}  // namespace kgprof

#endif  // KGPROF_LABELS_H_
