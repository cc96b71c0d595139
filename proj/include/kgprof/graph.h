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

// Knowledge graph store: entities, literals, property-labeled edges and the
// typing function. A graph is assembled by load_graph() or GraphBuilder and
// is immutable afterwards, so every accessor is safe to call concurrently.

#ifndef KGPROF_GRAPH_H_
#define KGPROF_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgprof/common.h"

namespace kgprof {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

enum class NodeKind : std::uint8_t { kEntity, kLiteral };

struct NodeRef {
  std::uint32_t id = 0;
  NodeKind kind = NodeKind::kEntity;

  auto operator<=>(const NodeRef&) const = default;
};

struct YearWindow {
  int min_year = 1000;
  int max_year = 2100;
};

struct LiteralValue {
  enum class Kind : std::uint8_t { kNumber, kYear, kText };

  std::string raw;
  Kind kind = Kind::kText;
  // Parsed value for kNumber and kYear.
  double number = 0.0;

  bool is_numeric() const { return kind != Kind::kText; }
  bool operator==(const LiteralValue& o) const { return raw == o.raw; }
};

// Classifies a literal lexical form. Four-digit integers and strings that
// start with a YYYY-MM date are years when inside `window`, and text
// otherwise; remaining strings are numbers when the whole string parses as a
// finite decimal.
LiteralValue parse_literal(std::string_view raw, const YearWindow& window = {});

struct Edge {
  EntityId source;
  PropertyId property;
  NodeRef target;

  bool is_attribute() const { return target.kind == NodeKind::kLiteral; }
  bool is_relation() const { return target.kind == NodeKind::kEntity; }
  EntityId target_entity() const { return EntityId{target.id}; }
  LiteralId target_literal() const { return LiteralId{target.id}; }
};

enum class GraphFormat { kNTriples, kTsv };

struct IngestOptions {
  std::string type_predicate{kRdfType};
  // Abort on the first malformed line; otherwise skip it.
  bool strict = true;
  YearWindow years;
};

struct IncompletenessReport {
  std::map<PropertyId, double> coverage;
  double mean_incompleteness = 0.0;
};

class KnowledgeGraph {
 public:
  std::size_t num_entities() const { return entity_names_.size(); }
  std::size_t num_literals() const { return literals_.size(); }
  std::size_t num_properties() const { return property_names_.size(); }
  std::size_t num_types() const { return type_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_relation_edges() const { return num_relation_edges_; }
  std::size_t num_attribute_edges() const { return edges_.size() - num_relation_edges_; }
  std::size_t num_type_assertions() const { return num_type_assertions_; }

  const std::string& entity_name(EntityId e) const { return entity_names_[e.value]; }
  const std::string& property_name(PropertyId p) const { return property_names_[p.value]; }
  const std::string& type_name(TypeId t) const { return type_names_[t.value]; }
  const LiteralValue& literal(LiteralId l) const { return literals_[l.value]; }

  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<PropertyId> find_property(std::string_view name) const;
  std::optional<TypeId> find_type(std::string_view name) const;
  std::optional<LiteralId> find_literal(std::string_view raw) const;

  std::span<const Edge> edges() const { return edges_; }
  // Outgoing edges of `e`, attribute and relation, in insertion order.
  std::span<const Edge> out_edges(EntityId e) const;
  // Indices into edges() of relation edges pointing at `e`.
  std::span<const std::uint32_t> in_relation_edges(EntityId e) const;
  // Relation-edge neighbors of `e` in both directions, one entry per edge.
  std::span<const EntityId> neighbors(EntityId e) const;

  std::span<const TypeId> types_of(EntityId e) const;
  bool has_type(EntityId e, TypeId t) const;
  bool is_typed(EntityId e) const { return !types_of(e).empty(); }

  // E_t sorted by interned id; empty for an unknown type.
  std::span<const EntityId> entities_of_type(TypeId t) const;
  // Position of `e` inside entities_of_type(t), if a member.
  std::optional<std::uint32_t> position_in_type(TypeId t, EntityId e) const;

  // Literal targets of p-edges whose source is in E_t, with multiplicity.
  std::vector<LiteralValue> attribute_values(TypeId t, PropertyId p) const;

  // Per-property share of E_t having at least one p-edge.
  IncompletenessReport incompleteness(TypeId t) const;

  double average_degree() const;

 private:
  friend class GraphBuilder;

  std::vector<std::string> entity_names_;
  std::vector<std::string> property_names_;
  std::vector<std::string> type_names_;
  std::vector<LiteralValue> literals_;
  std::unordered_map<std::string, std::uint32_t> entity_index_;
  std::unordered_map<std::string, std::uint32_t> property_index_;
  std::unordered_map<std::string, std::uint32_t> type_index_;
  std::unordered_map<std::string, std::uint32_t> literal_index_;

  std::vector<Edge> edges_;  // grouped by source
  std::vector<std::uint32_t> out_offsets_;
  std::vector<std::uint32_t> in_offsets_;
  std::vector<std::uint32_t> in_edges_;
  std::vector<std::uint32_t> nbr_offsets_;
  std::vector<EntityId> nbrs_;
  std::vector<std::uint32_t> type_offsets_;
  std::vector<TypeId> typing_;
  std::vector<std::vector<EntityId>> members_;
  std::size_t num_relation_edges_ = 0;
  std::size_t num_type_assertions_ = 0;
};

// Accumulates triples with set semantics and produces an indexed graph.
class GraphBuilder {
 public:
  explicit GraphBuilder(YearWindow years = {}) : years_(years) {}

  EntityId entity(std::string_view name);
  PropertyId property(std::string_view name);
  TypeId type(std::string_view name);

  void add_type(std::string_view entity, std::string_view type);
  void add_relation(std::string_view source, std::string_view property,
                    std::string_view target);
  void add_attribute(std::string_view source, std::string_view property,
                     std::string_view literal);

  std::size_t duplicates() const { return duplicates_; }

  // Throws kEmptyGraph when no entity was added.
  KnowledgeGraph build() &&;

 private:
  struct TripleKey {
    std::uint32_t s, p, o;
    NodeKind kind;
    bool operator==(const TripleKey&) const = default;
  };
  struct TripleHash {
    std::size_t operator()(const TripleKey& k) const noexcept;
  };

  LiteralId literal(std::string_view raw);
  void add_edge(EntityId s, PropertyId p, NodeRef o);

  YearWindow years_;
  KnowledgeGraph g_;
  std::vector<Edge> pending_;
  std::vector<std::vector<TypeId>> typing_;
  std::unordered_set<TripleKey, TripleHash> seen_;
  std::size_t duplicates_ = 0;
};

KnowledgeGraph load_graph(std::istream& in, GraphFormat format,
                          const IngestOptions& options = {});
KnowledgeGraph load_graph_file(const std::string& path, GraphFormat format,
                               const IngestOptions& options = {});

// 4-column TSV: subject, predicate, object, object_kind. Type assertions are
// written with `type_predicate`. Tabs, newlines and backslashes are escaped.
void write_tsv(const KnowledgeGraph& g, std::ostream& out,
               std::string_view type_predicate = kRdfType);

// Text table with triple, type, entity, literal, relation and attribute
// counts followed by per-type entity counts.
void write_stats(const KnowledgeGraph& g, std::ostream& out);

}  // namespace kgprof

#endif  // KGPROF_GRAPH_H_
